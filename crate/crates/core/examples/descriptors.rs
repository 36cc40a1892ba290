//! Building permutations from text descriptors and printing them back.

use prunedperm::parse_descriptor;

fn main() {
    for text in [
        "brp:n=3",
        "circ:k=8,c=3",
        "lcs:k=16,h=5",
        "qpp:k=16,h=3,b=4",
        "flip:brp:n=3",
        "block2d:s1=[brp:n=2],s2=[circ:k=4,c=1]",
        "mstream:s0=[brp:n=2],s1=[lcs:k=4,h=3],w=1.0",
        "random:k=6,seed=7",
        "brp:n=3,extra=1",
    ] {
        match parse_descriptor(text) {
            Ok(p) => println!("{text:<46} → {:?}", p.image().unwrap()),
            Err(e) => println!("{text:<46} → {e}"),
        }
    }
}
