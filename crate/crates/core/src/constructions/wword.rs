//! The words `W_{k,n}` and the ptNFAs `A_{k,n}` accepting everything except `W_{k,n}`.

use crate::automaton::{Nfa, NfaBuilder, Symbol, Word};
use crate::error::{Error, Result};

/// Longest `W_{k,n}` that `w_word` will materialise.
pub const MAX_WORD_LEN: u128 = 1 << 24;

/// The symbol `a_i`.
pub fn letter(i: usize) -> Symbol {
    Symbol::new(format!("a{i}")).expect("valid symbol")
}

/// `Σ_n = {a_1, ..., a_n}`.
pub fn sigma(n: usize) -> Vec<Symbol> {
    (1..=n).map(letter).collect()
}

/// `|W_{k,n}| = C(k+n, n) - 1`, or `None` on overflow.
pub fn w_length(k: usize, n: usize) -> Option<u128> {
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c.checked_mul(k as u128 + i)? / i;
    }
    Some(c - 1)
}

/// `W_{k,n}` with `W_{k,n} = ε` when `kn = 0`, `W_{k,1} = a_1^k`, `W_{1,n} = a_1 ... a_n`,
/// and `W_{k,n} = W_{k,n-1} a_n W_{k-1,n}` otherwise.
pub fn w_word(k: usize, n: usize) -> Result<Word> {
    let len = w_length(k, n).filter(|&l| l <= MAX_WORD_LEN);
    if len.is_none() {
        return Err(Error::CapExceeded(format!("W_{{{k},{n}}} is longer than {MAX_WORD_LEN}")));
    }
    let mut out = Vec::new();
    build(k, n, &mut out);
    Ok(out.into_iter().map(letter).collect())
}

fn build(k: usize, n: usize, out: &mut Vec<usize>) {
    if k == 0 || n == 0 {
        return;
    }
    if n == 1 {
        out.extend(std::iter::repeat_n(1, k));
        return;
    }
    if k == 1 {
        out.extend(1..=n);
        return;
    }
    build(k, n - 1, out);
    out.push(n);
    build(k - 1, n, out);
}

/// Name of state `(i;m)`.
pub fn state_name(i: usize, m: usize) -> String {
    format!("({i};{m})")
}

/// `A_{k,n}` over `Σ_n`: states `(i;m)` for `0 <= i <= 2k`, `1 <= m <= n`, plus `max`.
/// Initial states are `(0;m)`; accepting states are `(i;m)` with `i < k`, and `max`.
/// It accepts `Σ_n* \ {W_{k,n}}`.
pub fn a_kn(k: usize, n: usize) -> Result<Nfa> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("A_{k,n} needs k >= 1 and n >= 1".into()));
    }
    let mut b = NfaBuilder::with_alphabet(&sigma(n));
    b.set_name(format!("A_{{{k},{n}}}"));
    let mut id = vec![vec![0usize; 2 * k + 1]; n + 1];
    for (m, row) in id.iter_mut().enumerate().skip(1) {
        for (i, slot) in row.iter_mut().enumerate() {
            *slot = b.add_state(state_name(i, m))?;
        }
    }
    let max = b.add_state("max")?;
    for m in 1..=n {
        let am = m - 1;
        // Level m repeats the single-letter automaton for a_m and waits on smaller letters.
        for &q in &id[m][..=2 * k] {
            for j in 0..am {
                b.add_transition(q, j, q);
            }
        }
        for i in (0..2 * k).filter(|&i| i != k) {
            b.add_transition(id[m][i], am, id[m][i + 1]);
        }
        b.add_transition(id[m][k], am, max);
        b.add_transition(id[m][2 * k], am, max);
        b.add_transition(max, am, max);
        for i in 0..k {
            for l in 1..m {
                b.add_transition(id[m][i], am, id[l][i + 1]);
            }
        }
        // Lower levels: accepting states give up, the others restart at (k+1;m).
        for l in 1..m {
            for (i, &q) in id[l][..=2 * k].iter().enumerate() {
                let target = if i < k { max } else { id[m][k + 1] };
                b.add_transition(q, am, target);
            }
        }
        b.set_initial(id[m][0]);
        for &q in &id[m][..k] {
            b.set_accepting(q);
        }
    }
    b.set_accepting(max);
    Ok(b.build())
}

fn parse_state(name: &str) -> Option<(usize, usize)> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    let (i, m) = inner.split_once(';')?;
    Some((i.parse().ok()?, m.parse().ok()?))
}

/// Recovers `(k, n)` from the state names of an `A_{k,n}`.
pub fn kn_of(a: &Nfa) -> Result<(usize, usize)> {
    let shape = |msg: &str| Error::WrongShape(msg.to_string());
    a.state_id("max").ok_or_else(|| shape("no state `max`"))?;
    let mut top_i = 0;
    let mut top_m = 0;
    for (q, name) in a.states().iter().enumerate() {
        if name == "max" {
            continue;
        }
        let (i, m) = parse_state(name).ok_or_else(|| shape(&format!("unexpected state {name:?} (state {q})")))?;
        top_i = top_i.max(i);
        top_m = top_m.max(m);
    }
    if top_i % 2 != 0 || top_i == 0 || top_m == 0 {
        return Err(shape("state indices do not match any A_{k,n}"));
    }
    let (k, n) = (top_i / 2, top_m);
    if a.num_states() != n * (2 * k + 1) + 1 || a.num_symbols() != n {
        return Err(shape("state or symbol count does not match A_{k,n}"));
    }
    Ok((k, n))
}

/// Removes the states `(k+1;i), ..., (2k;i)` of `A_{k,n}` for every `i`. The language is
/// unchanged and the result is an rpoNFA.
pub fn strip_redundant(a: &Nfa) -> Result<Nfa> {
    let (k, _) = kn_of(a)?;
    Ok(a.restrict(|q| match parse_state(a.state_name(q)) {
        Some((i, _)) => i <= k,
        None => true,
    }))
}
