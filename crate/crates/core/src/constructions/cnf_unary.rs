//! 3-CNF satisfiability as (non-)universality of a unary NFA.
//!
//! Assignments are encoded as numbers `z` through the first `n` primes `p_1, ..., p_n`:
//! `z` encodes `x_j = z mod p_j` when every residue is 0 or 1.

use crate::automaton::{Nfa, NfaBuilder, Symbol};
use crate::constructions::formula::Cnf3Formula;
use crate::error::{Error, Result};

/// The first `n` primes.
pub fn primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2u64;
    while out.len() < n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Least `z` with `z ≡ r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(congruences: &[(u64, u64)]) -> u64 {
    let mut z = 0u64;
    let mut step = 1u64;
    for &(r, m) in congruences {
        while z % m != r % m {
            z += step;
        }
        step *= m;
    }
    z
}

/// Largest cycle accepted when building clause components.
pub const MAX_CYCLE: u64 = 1 << 20;

/// Disjoint union of cycles over `{0}`:
/// - for each prime `p_j > 2`, the numbers with residue at least 2 mod `p_j` (not an encoding);
/// - for each clause, `0^{z}(0^P)*` where `P` is the product of its variables' primes and `z`
///   encodes the unique partial assignment falsifying the clause.
///
/// The result is universal iff the formula is unsatisfiable.
pub fn cnf3_to_unary_nfa(phi: &Cnf3Formula) -> Result<Nfa> {
    phi.validate()?;
    let ps = primes(phi.vars);
    let mut b = NfaBuilder::with_alphabet(&[Symbol::new("0")?]);
    b.set_name("cnf3-unary");
    let cycle = |b: &mut NfaBuilder, prefix: String, len: u64, accept: &dyn Fn(u64) -> bool| -> Result<()> {
        let ids: Vec<usize> = (0..len).map(|r| b.add_state(format!("{prefix}_{r}"))).collect::<Result<_>>()?;
        for r in 0..ids.len() {
            b.add_transition(ids[r], 0, ids[(r + 1) % ids.len()]);
            if accept(r as u64) {
                b.set_accepting(ids[r]);
            }
        }
        b.set_initial(ids[0]);
        Ok(())
    };
    for (j, &p) in ps.iter().enumerate() {
        if p > 2 {
            cycle(&mut b, format!("e{}", j + 1), p, &|r| r >= 2)?;
        }
    }
    for (k, clause) in phi.clauses.iter().enumerate() {
        let mut modulus = 1u64;
        let mut congruences = Vec::new();
        for &l in clause {
            let p = ps[l.unsigned_abs() as usize - 1];
            modulus = modulus.checked_mul(p).filter(|&m| m <= MAX_CYCLE).ok_or_else(|| {
                Error::CapExceeded(format!("clause {} needs a cycle longer than {MAX_CYCLE}", k + 1))
            })?;
            congruences.push((u64::from(l < 0), p));
        }
        let z = crt(&congruences);
        cycle(&mut b, format!("c{}", k + 1), modulus, &|r| r == z)?;
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Word;

    #[test]
    fn primes_and_crt() {
        assert_eq!(primes(5), vec![2, 3, 5, 7, 11]);
        // x1 positive, x2 negated, x3 positive: z ≡ 0 mod 2, 1 mod 3, 0 mod 5
        assert_eq!(crt(&[(0, 2), (1, 3), (0, 5)]), 10);
    }

    #[test]
    fn clause_component_accepts_falsifying_encoding() {
        let phi = Cnf3Formula { vars: 3, clauses: vec![vec![1, -2, 3]] };
        let a = cnf3_to_unary_nfa(&phi).unwrap();
        let zeros = |z: usize| Word::parse(&vec!["0"; z].join(" ")).unwrap();
        assert!(a.accepts(&zeros(10)).unwrap());
        assert!(a.accepts(&zeros(40)).unwrap());
        // z = 6 encodes x1 = 0, x2 = 0, x3 = 1, which satisfies the clause
        assert!(!a.accepts(&zeros(6)).unwrap());
    }
}
