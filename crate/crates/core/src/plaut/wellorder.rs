use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Rational;

/// A computable bijection `N -> Q`.
///
/// Reduced fractions `p/q` are listed by height `|p| + q`, then by
/// increasing denominator, positive before negative:
/// `0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, ...`.
/// The block of height `s ≥ 2` has `2 φ(s)` entries.
#[derive(Clone, Debug)]
pub struct QWellOrder {
    // starts[s] = rank of the first fraction of height s, for s < starts.len().
    starts: Vec<u64>,
}

impl Default for QWellOrder {
    fn default() -> Self {
        QWellOrder::with_height_table(2048)
    }
}

fn totient(mut s: u64) -> u64 {
    let mut result = s;
    let mut p = 2;
    while p * p <= s {
        if s.is_multiple_of(p) {
            while s.is_multiple_of(p) {
                s /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if s > 1 {
        result -= result / s;
    }
    result
}

fn block_len(s: u64) -> u64 {
    if s == 1 {
        1
    } else {
        2 * totient(s)
    }
}

impl QWellOrder {
    /// Precomputes block offsets for heights below `max_height`; larger
    /// heights are handled by direct summation.
    pub fn with_height_table(max_height: u64) -> Self {
        let mut starts = vec![0, 0];
        for s in 1..max_height.max(2) {
            let next = starts[s as usize] + block_len(s);
            starts.push(next);
        }
        QWellOrder { starts }
    }

    fn block_start(&self, s: u64) -> u64 {
        if let Some(&v) = self.starts.get(s as usize) {
            return v;
        }
        let last = self.starts.len() as u64 - 1;
        (last..s).fold(self.starts[last as usize], |acc, t| acc + block_len(t))
    }

    /// The rational at position `i`.
    pub fn unrank(&self, i: u64) -> Rational {
        let table_end = *self.starts.last().expect("table is never empty");
        let mut s = if i < table_end {
            (self.starts.partition_point(|&v| v <= i) - 1) as u64
        } else {
            self.starts.len() as u64 - 1
        };
        let mut start = self.block_start(s);
        while i >= start + block_len(s) {
            start += block_len(s);
            s += 1;
        }
        if s == 1 {
            return Rational::zero();
        }
        let mut offset = i - start;
        for q in 1..s {
            if q.gcd(&s) != 1 {
                continue;
            }
            if offset < 2 {
                let p = (s - q) as i64;
                let p = if offset == 0 { p } else { -p };
                return Rational::new(BigInt::from(p), BigInt::from(q));
            }
            offset -= 2;
        }
        unreachable!("block of height {s} has 2φ(s) entries")
    }

    /// Position of `t`, or `None` if its height does not fit in a `u64`.
    pub fn rank(&self, t: &Rational) -> Option<u64> {
        if t.is_zero() {
            return Some(0);
        }
        let p = t.numer().abs().to_u64()?;
        let q = t.denom().to_u64()?;
        let s = p.checked_add(q)?;
        let before = (1..q).filter(|c| c.gcd(&s) == 1).count() as u64;
        let sign = u64::from(t.is_negative());
        Some(self.block_start(s) + 2 * before + sign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plaut::{int, rat};

    #[test]
    fn listing_prefix() {
        let w = QWellOrder::default();
        let expected = [
            int(0),
            int(1),
            int(-1),
            int(2),
            int(-2),
            rat(1, 2),
            rat(-1, 2),
            int(3),
            int(-3),
        ];
        for (i, t) in expected.iter().enumerate() {
            assert_eq!(&w.unrank(i as u64), t);
        }
    }

    #[test]
    fn totients() {
        let phi: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn round_trip_beyond_table() {
        let small = QWellOrder::with_height_table(4);
        let full = QWellOrder::default();
        for i in 0..3000 {
            let t = small.unrank(i);
            assert_eq!(t, full.unrank(i));
            assert_eq!(small.rank(&t), Some(i));
        }
    }

    #[test]
    fn every_small_fraction_is_listed() {
        let w = QWellOrder::default();
        let mut seen = std::collections::HashSet::new();
        for p in -12..=12i64 {
            for q in 1..=12i64 {
                let r = w.rank(&rat(p, q)).unwrap();
                assert_eq!(w.unrank(r), rat(p, q));
                seen.insert(r);
            }
        }
    }
}
