use crate::error::{Error, Result};

/// Packs addresses as little-endian `u32` words.
pub fn addresses_to_le_bytes(addresses: &[u64]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(addresses.len() * 4);
    for &a in addresses {
        let w = u32::try_from(a).map_err(|_| Error::Overflow("address exceeds 32 bits"))?;
        out.extend_from_slice(&w.to_le_bytes());
    }
    Ok(out)
}

pub fn addresses_from_le_bytes(bytes: &[u8]) -> Result<Vec<u64>> {
    if !bytes.len().is_multiple_of(4) {
        return Err(Error::Parse { pos: bytes.len() - bytes.len() % 4, msg: "truncated address word".into() });
    }
    Ok(bytes.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as u64).collect())
}

pub fn addresses_to_csv(addresses: &[u64]) -> String {
    let mut s = String::from("# prunedperm-csv v1\nindex,address\n");
    for (i, a) in addresses.iter().enumerate() {
        s.push_str(&format!("{i},{a}\n"));
    }
    s
}
