//! Enumeration of the closed sets of a closure operator.
//!
//! Uses Ganter's NextClosure: closed sets come out in lectic order, each one
//! after at most `n` closure evaluations, without storing the lattice.

use crate::bitset::Bits;

/// The closed set that follows `current` in lectic order, if any.
pub fn next_closure<F>(current: Bits, n: usize, closure: &F) -> Option<Bits>
where
    F: Fn(Bits) -> Bits,
{
    let mut a = current;
    for i in (0..n).rev() {
        if a.contains(i) {
            a.remove(i);
        } else {
            let b = closure(a | Bits::singleton(i));
            if (b - a).below(i).is_empty() {
                return Some(b);
            }
        }
    }
    None
}

/// All closed sets of `closure` on `{0, .., n-1}`, in lectic order.
pub fn all_closed_sets<F>(n: usize, closure: F) -> Vec<Bits>
where
    F: Fn(Bits) -> Bits,
{
    let mut out = Vec::new();
    let mut a = closure(Bits::EMPTY);
    loop {
        out.push(a);
        match next_closure(a, n, &closure) {
            Some(b) => a = b,
            None => break,
        }
    }
    out
}

/// Checks extensivity, monotonicity and idempotence of `closure` on every
/// subset of `{0, .., n-1}`. Exponential; meant for `n` up to about 12.
pub fn is_closure_operator<F>(n: usize, closure: F) -> bool
where
    F: Fn(Bits) -> Bits,
{
    assert!(n <= 20);
    let sets: Vec<Bits> = (0u128..(1u128 << n)).map(Bits).collect();
    let images: Vec<Bits> = sets.iter().map(|&s| closure(s)).collect();
    for (s, c) in sets.iter().zip(&images) {
        if !s.is_subset(*c) || closure(*c) != *c {
            return false;
        }
    }
    for (i, s) in sets.iter().enumerate() {
        for j in 0..n {
            let t = *s | Bits::singleton(j);
            if !images[i].is_subset(images[t.0 as usize]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_closed(n: usize, closure: impl Fn(Bits) -> Bits) -> Vec<Bits> {
        let mut v: Vec<Bits> = (0u128..(1u128 << n))
            .map(Bits)
            .filter(|&s| closure(s) == s)
            .collect();
        v.sort();
        v
    }

    #[test]
    fn matches_brute_force_on_up_sets() {
        // up-closure in the chain 0 < 1 < 2 < 3 plus isolated 4
        let up = |s: Bits| {
            let mut r = s;
            for i in s.iter() {
                if i < 4 {
                    for j in i..4 {
                        r.insert(j);
                    }
                }
            }
            r
        };
        let mut fast = all_closed_sets(5, up);
        fast.sort();
        assert_eq!(fast, brute_force_closed(5, up));
        assert_eq!(fast.len(), 10);
        assert!(is_closure_operator(5, up));
    }

    #[test]
    fn identity_closure_enumerates_powerset() {
        assert_eq!(all_closed_sets(4, |s| s).len(), 16);
    }

    #[test]
    fn non_idempotent_map_is_rejected() {
        let bad = |s: Bits| if s.contains(0) { s | Bits::singleton(1) } else { s };
        assert!(is_closure_operator(3, bad));
        let shift = |s: Bits| Bits((s.0 << 1) & 0b111) | s;
        assert!(!is_closure_operator(3, shift));
    }
}
