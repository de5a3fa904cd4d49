use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature};

/// Maximum number of distinct propositional atoms [`taut_check`] will enumerate.
pub const MAX_ATOMS: usize = 20;

enum Node {
    Atom(usize),
    Not(Box<Node>),
    Or(Box<Node>, Box<Node>),
}

fn abstract_formula<'f>(phi: &'f Formula, atoms: &mut HashMap<&'f Formula, usize>) -> Node {
    match phi {
        Formula::Not(a) => Node::Not(Box::new(abstract_formula(a, atoms))),
        Formula::Or(a, b) => Node::Or(
            Box::new(abstract_formula(a, atoms)),
            Box::new(abstract_formula(b, atoms)),
        ),
        Formula::Var(_) | Formula::App(..) => {
            let next = atoms.len();
            Node::Atom(*atoms.entry(phi).or_insert(next))
        }
    }
}

fn eval(node: &Node, words: &[u64]) -> u64 {
    match node {
        Node::Atom(i) => words[*i],
        Node::Not(a) => !eval(a, words),
        Node::Or(a, b) => eval(a, words) | eval(b, words),
    }
}

// Truth-table columns for the six low atoms within one 64-row block.
const LOW: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Decides whether `phi` is an instance of a classical tautology.
///
/// Variables and applications are opaque atoms (structurally equal subtrees share
/// one atom); the propositional skeleton is evaluated on all valuations.
pub fn taut_check(sig: &Signature, phi: &Formula) -> Result<bool> {
    sig.sort_of(phi)?;
    let mut atoms = HashMap::new();
    let node = abstract_formula(phi, &mut atoms);
    let k = atoms.len();
    if k > MAX_ATOMS {
        return Err(Error::TooManyAtoms(format!(
            "{k} distinct atoms exceed the limit of {MAX_ATOMS}"
        )));
    }
    let rows = 1u64 << k;
    let valid_mask = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };
    let blocks = rows.div_ceil(64);
    let mut words = vec![0u64; k];
    for block in 0..blocks {
        for (i, w) in words.iter_mut().enumerate() {
            *w = if i < 6 {
                LOW[i]
            } else if block >> (i - 6) & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        if eval(&node, &words) & valid_mask != valid_mask {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature};

    fn sig() -> Signature {
        let mut text = String::from("sort s\nop f : s -> s\n");
        for i in 0..24 {
            text.push_str(&format!("var p{i} : s\n"));
        }
        parse_signature(&text).unwrap()
    }

    fn t(text: &str) -> Result<bool> {
        let sig = sig();
        taut_check(&sig, &parse_formula(&sig, text).unwrap())
    }

    #[test]
    fn small_cases() {
        assert!(t("p0 | !p0").unwrap());
        assert!(t("f(p0) -> f(p0)").unwrap());
        assert!(!t("p0 -> p1").unwrap());
        assert!(!t("f(p0) -> f(p1)").unwrap());
        assert!(t("(p0 -> p1) -> (p1 -> p2) -> p0 -> p2").unwrap());
        assert!(t("bot@s -> p3").unwrap());
        assert!(t("[f](p0) <-> !f(!p0)").unwrap());
    }

    #[test]
    fn atoms_beyond_one_block() {
        // 8 atoms: the falsifying row is in a later block
        let text = "p0 & p1 & p2 & p3 & p4 & p5 & p6 & p7 -> p0 & p8";
        assert!(!t(text).unwrap());
        let mut big = String::from("p0");
        for i in 1..20 {
            big = format!("{big} & p{i}");
        }
        assert!(t(&format!("{big} -> p19")).unwrap());
        assert!(!t(&format!("{big} -> !p19")).unwrap());
    }

    #[test]
    fn atom_limit() {
        let mut big = String::from("p0");
        for i in 1..21 {
            big = format!("{big} | p{i}");
        }
        assert!(matches!(t(&big), Err(Error::TooManyAtoms(_))));
    }
}
