//! Textual permutation descriptors.
//!
//! ```text
//! descriptor := name ':' body
//! brp:n=<bits>                      bit reversal on 2^bits
//! circ:k=<len>,c=<shift>            j + c mod k
//! lcs:k=<len>,h=<odd>               h·j mod k
//! qpp:k=<len>,h=<lin>,b=<quad>      h·j + b·j² mod k
//! flip:<descriptor>                 k − 1 − inner(j)
//! table:v=<a>.<b>.<c>...            explicit image list
//! random:k=<len>,seed=<u64>         seeded random table
//! block2d:s1=[<descriptor>],s2=[<descriptor>]
//! mstream:s0=[<descriptor>],s1=[<descriptor>],...[,w=<order>.<list>]
//! ```
//!
//! Nested descriptors go in square brackets. Parse errors carry the byte
//! offset where parsing failed.

use super::Permutation;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub fn parse_descriptor(text: &str) -> Result<Permutation> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let perm = p.descriptor()?;
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(perm)
}

enum Value {
    Numbers(Vec<u64>),
    Nested(Permutation),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        digits.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "expected an unsigned integer".into(),
        })
    }

    fn descriptor(&mut self) -> Result<Permutation> {
        let start = self.pos;
        let name = self.word()?;
        self.expect(b':')?;
        if name == "flip" {
            return Ok(Permutation::flip(self.descriptor()?));
        }
        let params = self.params()?;
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { pos: start, msg: other.to_string() },
        };
        build(&name, params).map_err(at)
    }

    fn params(&mut self) -> Result<BTreeMap<String, (usize, Value)>> {
        let mut out = BTreeMap::new();
        loop {
            let key_pos = self.pos;
            let key = self.word()?;
            self.expect(b'=')?;
            let value = if self.peek() == Some(b'[') {
                self.pos += 1;
                let inner = self.descriptor()?;
                self.expect(b']')?;
                Value::Nested(inner)
            } else {
                let mut list = vec![self.number()?];
                while self.peek() == Some(b'.') {
                    self.pos += 1;
                    list.push(self.number()?);
                }
                Value::Numbers(list)
            };
            if out.insert(key.clone(), (key_pos, value)).is_some() {
                return Err(Error::Parse { pos: key_pos, msg: format!("duplicate key '{key}'") });
            }
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }
}

struct Params(BTreeMap<String, (usize, Value)>);

impl Params {
    fn int(&mut self, key: &str) -> Result<u64> {
        match self.0.remove(key) {
            Some((_, Value::Numbers(v))) if v.len() == 1 => Ok(v[0]),
            Some((pos, _)) => Err(Error::Parse { pos, msg: format!("'{key}' must be one integer") }),
            None => Err(Error::InvalidArgument(format!("missing parameter '{key}'"))),
        }
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<u64>>> {
        match self.0.remove(key) {
            Some((_, Value::Numbers(v))) => Ok(Some(v)),
            Some((pos, _)) => Err(Error::Parse { pos, msg: format!("'{key}' must be a number list") }),
            None => Ok(None),
        }
    }

    fn nested(&mut self, key: &str) -> Result<Option<Permutation>> {
        match self.0.remove(key) {
            Some((_, Value::Nested(p))) => Ok(Some(p)),
            Some((pos, _)) => Err(Error::Parse {
                pos,
                msg: format!("'{key}' must be a bracketed descriptor"),
            }),
            None => Ok(None),
        }
    }

    fn finish(self) -> Result<()> {
        match self.0.into_iter().next() {
            Some((key, (pos, _))) => Err(Error::Parse { pos, msg: format!("unknown key '{key}'") }),
            None => Ok(()),
        }
    }
}

fn build(name: &str, raw: BTreeMap<String, (usize, Value)>) -> Result<Permutation> {
    let mut p = Params(raw);
    let perm = match name {
        "brp" => {
            let n = p.int("n")?;
            Permutation::brp(u32::try_from(n).unwrap_or(u32::MAX))?
        }
        "circ" => Permutation::circular(p.int("k")?, p.int("c")?)?,
        "lcs" => Permutation::lcs(p.int("k")?, p.int("h")?)?,
        "qpp" => Permutation::qpp(p.int("k")?, p.int("h")?, p.int("b")?)?,
        "table" => {
            let v = p.list("v")?.ok_or_else(|| Error::InvalidArgument("missing 'v'".into()))?;
            Permutation::table(v)?
        }
        "random" => Permutation::random(p.int("k")?, p.int("seed")?)?,
        "block2d" => {
            let s1 = p.nested("s1")?.ok_or_else(|| Error::InvalidArgument("missing 's1'".into()))?;
            let s2 = p.nested("s2")?.ok_or_else(|| Error::InvalidArgument("missing 's2'".into()))?;
            Permutation::block2d(s1, s2)?
        }
        "mstream" => {
            let mut streams = Vec::new();
            while let Some(s) = p.nested(&format!("s{}", streams.len()))? {
                streams.push(s);
            }
            let order = match p.list("w")? {
                Some(w) => w.into_iter().map(|x| x as usize).collect(),
                None => (0..streams.len()).collect(),
            };
            Permutation::mstream(streams, order)?
        }
        other => return Err(Error::InvalidArgument(format!("unknown permutation family '{other}'"))),
    };
    p.finish()?;
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        for d in [
            "brp:n=10",
            "circ:k=32,c=7",
            "lcs:k=8,h=3",
            "qpp:k=2048,h=63,b=128",
            "flip:brp:n=3",
            "table:v=3.1.7.2.5.8.6.4.0.9",
            "block2d:s1=[brp:n=4],s2=[qpp:k=32,h=15,b=2]",
            "mstream:s0=[brp:n=3],s1=[flip:brp:n=3],w=1.0",
        ] {
            let p = parse_descriptor(d).unwrap_or_else(|e| panic!("{d}: {e}"));
            assert_eq!(p.to_string(), d);
            assert_eq!(parse_descriptor(&p.to_string()).unwrap(), p);
        }
        let r = parse_descriptor("random:k=16,seed=3").unwrap();
        assert_eq!(r.len(), 16);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_descriptor("brp:n=x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        match parse_descriptor("circ:k=32,c=7]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        match parse_descriptor("block2d:s1=[brp:n=2],s2=[lcs:k=8,h=2]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 25),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_descriptor("bogus:n=1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_descriptor("brp:n=3,q=1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_descriptor(""), Err(Error::Parse { .. })));
    }
}
