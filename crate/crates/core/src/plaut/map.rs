use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{PlError, QWellOrder, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct Knot {
    #[serde(with = "super::ratser")]
    x: Rational,
    #[serde(with = "super::ratser")]
    y: Rational,
}

/// A piecewise-linear order-preserving bijection of `Q`.
///
/// Stored as knots `(x_i, f(x_i))` with strictly increasing coordinates and
/// the slopes of the two unbounded rays; `f` interpolates linearly between
/// knots. After normalization the knots are exactly the breakpoints (slope
/// changes), except that a single affine map keeps one anchor knot at
/// `x = 0`. Equal maps therefore have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlAut {
    knots: Vec<Knot>,
    #[serde(with = "super::ratser")]
    left_slope: Rational,
    #[serde(with = "super::ratser")]
    right_slope: Rational,
}

impl PlAut {
    pub fn identity() -> Self {
        PlAut::affine(Rational::one(), Rational::zero()).expect("slope 1 is positive")
    }

    /// `t -> slope * t + intercept`.
    pub fn affine(slope: Rational, intercept: Rational) -> Result<Self, PlError> {
        PlAut::from_knots(vec![(Rational::zero(), intercept)], slope.clone(), slope)
    }

    pub fn translation(c: Rational) -> Self {
        PlAut::affine(Rational::one(), c).expect("slope 1 is positive")
    }

    /// Builds a map from knots `(x, f(x))` and ray slopes, checking that it is
    /// an order-automorphism (coordinates strictly increasing, slopes
    /// positive), then normalizes.
    pub fn from_knots(
        knots: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self, PlError> {
        if knots.is_empty() {
            return Err(PlError::InvalidMap("at least one knot is required".into()));
        }
        if !left_slope.is_positive() || !right_slope.is_positive() {
            return Err(PlError::InvalidMap("ray slopes must be positive".into()));
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(PlError::InvalidMap(format!(
                    "knots ({}, {}) and ({}, {}) are not strictly increasing",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let knots = knots.into_iter().map(|(x, y)| Knot { x, y }).collect();
        Ok(PlAut {
            knots,
            left_slope,
            right_slope,
        }
        .normalized())
    }

    fn segment_slope(&self, i: usize) -> Rational {
        let (a, b) = (&self.knots[i], &self.knots[i + 1]);
        (&b.y - &a.y) / (&b.x - &a.x)
    }

    // Drops knots where the slope does not change.
    fn normalized(self) -> PlAut {
        let len = self.knots.len();
        let slopes: Vec<Rational> = std::iter::once(self.left_slope.clone())
            .chain((0..len - 1).map(|i| self.segment_slope(i)))
            .chain(std::iter::once(self.right_slope.clone()))
            .collect();
        let mut knots: Vec<Knot> = self
            .knots
            .iter()
            .enumerate()
            .filter(|(i, _)| slopes[*i] != slopes[*i + 1])
            .map(|(_, k)| k.clone())
            .collect();
        if knots.is_empty() {
            let y = self.apply(&Rational::zero());
            knots.push(Knot {
                x: Rational::zero(),
                y,
            });
        }
        PlAut {
            knots,
            left_slope: self.left_slope,
            right_slope: self.right_slope,
        }
    }

    /// `f(t)`.
    pub fn apply(&self, t: &Rational) -> Rational {
        let first = &self.knots[0];
        let last = &self.knots[self.knots.len() - 1];
        if t <= &first.x {
            return &first.y + &self.left_slope * (t - &first.x);
        }
        if t >= &last.x {
            return &last.y + &self.right_slope * (t - &last.x);
        }
        let i = self.knots.partition_point(|k| &k.x <= t) - 1;
        &self.knots[i].y + self.segment_slope(i) * (t - &self.knots[i].x)
    }

    /// Points where the slope changes.
    pub fn breakpoints(&self) -> Vec<Rational> {
        if self.left_slope == self.right_slope && self.knots.len() == 1 {
            return Vec::new();
        }
        self.knots.iter().map(|k| k.x.clone()).collect()
    }

    /// Knots as `(x, f(x))` pairs.
    pub fn knots(&self) -> Vec<(Rational, Rational)> {
        self.knots
            .iter()
            .map(|k| (k.x.clone(), k.y.clone()))
            .collect()
    }

    pub fn slopes(&self) -> (&Rational, &Rational) {
        (&self.left_slope, &self.right_slope)
    }

    pub fn is_identity(&self) -> bool {
        *self == PlAut::identity()
    }

    /// Every piece has positive slope.
    pub fn is_increasing(&self) -> bool {
        self.left_slope.is_positive()
            && self.right_slope.is_positive()
            && (0..self.knots.len() - 1).all(|i| self.segment_slope(i).is_positive())
    }

    /// `self ∘ other`, i.e. `t -> self(other(t))`.
    pub fn compose(&self, other: &PlAut) -> PlAut {
        plaut_compose(self, other)
    }

    pub fn inverse(&self) -> PlAut {
        plaut_inverse(self)
    }

    /// `self^k` under composition.
    pub fn pow(&self, k: i64) -> PlAut {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = PlAut::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Conjugate by `t -> -t`: the map `t -> -f(-t)`.
    pub fn mirror(&self) -> PlAut {
        let knots = self
            .knots
            .iter()
            .rev()
            .map(|k| Knot { x: -&k.x, y: -&k.y })
            .collect();
        PlAut {
            knots,
            left_slope: self.right_slope.clone(),
            right_slope: self.left_slope.clone(),
        }
        .normalized()
    }

    /// A fixed point `p` with `lo < p ≤ hi`, if there is one. Isolated fixed
    /// points and closed starts of fixed pieces are preferred, smallest
    /// first.
    pub fn fixed_point_in(&self, lo: &Rational, hi: &Rational) -> Option<Rational> {
        if lo >= hi {
            return None;
        }
        let len = self.knots.len();
        // Pieces as (start, end, slope, point on the piece); None means unbounded.
        let mut pieces: Vec<(Option<Rational>, Option<Rational>, Rational, Rational)> = Vec::new();
        pieces.push((
            None,
            Some(self.knots[0].x.clone()),
            self.left_slope.clone(),
            self.knots[0].x.clone(),
        ));
        for i in 0..len - 1 {
            pieces.push((
                Some(self.knots[i].x.clone()),
                Some(self.knots[i + 1].x.clone()),
                self.segment_slope(i),
                self.knots[i].x.clone(),
            ));
        }
        pieces.push((
            Some(self.knots[len - 1].x.clone()),
            None,
            self.right_slope.clone(),
            self.knots[len - 1].x.clone(),
        ));

        let mut best: Option<Rational> = None;
        for (start, end, slope, anchor) in pieces {
            // Restrict the piece to (lo, hi].
            let upper = match &end {
                Some(e) if e < hi => e.clone(),
                _ => hi.clone(),
            };
            let lower_closed = start.clone().filter(|s| s > lo);
            if let Some(s) = &lower_closed {
                if s > &upper {
                    continue;
                }
            } else if &upper <= lo {
                continue;
            }
            let h_anchor = self.apply(&anchor) - &anchor;
            let h_slope = &slope - Rational::one();
            let candidate = if h_slope.is_zero() {
                if !h_anchor.is_zero() {
                    continue;
                }
                lower_closed.unwrap_or(upper)
            } else {
                let root = &anchor - &h_anchor / &h_slope;
                let above_lower = match &lower_closed {
                    Some(s) => &root >= s,
                    None => &root > lo,
                };
                if !above_lower || root > upper {
                    continue;
                }
                root
            };
            if best.as_ref().is_none_or(|b| &candidate < b) {
                best = Some(candidate);
            }
        }
        best
    }
}

impl fmt::Display for PlAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slope {} | ", self.left_slope)?;
        for (i, k) in self.knots.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} ↦ {}", k.x, k.y)?;
        }
        write!(f, " | slope {}", self.right_slope)
    }
}

/// `f ∘ g`. Breakpoints of the composite lie among the breakpoints of `g`
/// and the preimages under `g` of the breakpoints of `f`.
pub fn plaut_compose(f: &PlAut, g: &PlAut) -> PlAut {
    let g_inv = g.inverse();
    let mut xs: Vec<Rational> = g.breakpoints();
    xs.extend(f.breakpoints().iter().map(|b| g_inv.apply(b)));
    xs.sort();
    xs.dedup();
    if xs.is_empty() {
        xs.push(Rational::zero());
    }
    let knots = xs
        .into_iter()
        .map(|x| {
            let y = f.apply(&g.apply(&x));
            (x, y)
        })
        .collect();
    PlAut::from_knots(
        knots,
        &f.left_slope * &g.left_slope,
        &f.right_slope * &g.right_slope,
    )
    .expect("composites of automorphisms are automorphisms")
}

/// Swaps the coordinates of every knot.
pub fn plaut_inverse(f: &PlAut) -> PlAut {
    let knots = f
        .knots
        .iter()
        .map(|k| Knot {
            x: k.y.clone(),
            y: k.x.clone(),
        })
        .collect();
    PlAut {
        knots,
        left_slope: f.left_slope.recip(),
        right_slope: f.right_slope.recip(),
    }
    .normalized()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstDifference {
    pub rank: u64,
    #[serde(with = "super::ratser")]
    pub point: Rational,
}

/// The least `i ≤ search_cap` with `f(unrank(i)) ≠ g(unrank(i))`.
pub fn first_difference(
    order: &QWellOrder,
    f: &PlAut,
    g: &PlAut,
    search_cap: u64,
) -> Result<FirstDifference, PlError> {
    (0..=search_cap)
        .map(|rank| (rank, order.unrank(rank)))
        .find(|(_, t)| f.apply(t) != g.apply(t))
        .map(|(rank, point)| FirstDifference { rank, point })
        .ok_or(PlError::Exhausted { cap: search_cap })
}

/// Compares `f` and `g` in the well-order-induced left-order.
pub fn plaut_compare(
    order: &QWellOrder,
    f: &PlAut,
    g: &PlAut,
    search_cap: u64,
) -> Result<Ordering, PlError> {
    if f == g {
        return Ok(Ordering::Equal);
    }
    let diff = first_difference(order, f, g, search_cap)?;
    Ok(f.apply(&diff.point).cmp(&g.apply(&diff.point)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plaut::{int, rat};
    use proptest::prelude::*;

    fn pl(knots: &[(i64, i64)], left: Rational, right: Rational) -> PlAut {
        PlAut::from_knots(
            knots.iter().map(|&(x, y)| (int(x), int(y))).collect(),
            left,
            right,
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(PlAut::identity().apply(&rat(7, 3)), rat(7, 3));
        let f = pl(&[(0, 2), (3, 3)], int(1), int(1));
        assert_eq!(f.apply(&int(-5)), int(-3));
        assert_eq!(f.apply(&int(0)), int(2));
        assert_eq!(f.apply(&rat(3, 2)), rat(5, 2));
        assert_eq!(f.apply(&int(3)), int(3));
        assert_eq!(f.apply(&int(10)), int(10));
    }

    #[test]
    fn normalization_is_canonical() {
        let a = pl(&[(0, 1), (1, 2), (2, 3)], int(1), int(1));
        assert_eq!(a, PlAut::translation(int(1)));
        assert!(a.breakpoints().is_empty());
        let b = pl(&[(5, 5)], int(1), int(1));
        assert!(b.is_identity());
    }

    #[test]
    fn compose_and_invert() {
        let t1 = PlAut::translation(int(1));
        assert_eq!(t1.compose(&t1), PlAut::translation(int(2)));
        let f = pl(&[(0, 2), (3, 3)], int(1), int(1));
        assert!(f.compose(&f.inverse()).is_identity());
        assert!(f.inverse().compose(&f).is_identity());
        assert!(f.pow(3).apply(&int(0)) < int(3));
        assert_eq!(f.pow(-2), f.inverse().compose(&f.inverse()));
    }

    #[test]
    fn invalid_maps_rejected() {
        assert!(PlAut::from_knots(vec![], int(1), int(1)).is_err());
        assert!(PlAut::affine(int(0), int(1)).is_err());
        assert!(
            PlAut::from_knots(vec![(int(0), int(1)), (int(1), int(1))], int(1), int(1)).is_err()
        );
    }

    #[test]
    fn mirror_negates() {
        let f = pl(&[(0, 2), (3, 3)], int(1), rat(1, 2));
        let m = f.mirror();
        for t in [-7, -3, -1, 0, 2, 5] {
            assert_eq!(m.apply(&int(t)), -f.apply(&int(-t)));
        }
    }

    #[test]
    fn fixed_points() {
        let f = pl(&[(0, 2), (3, 3)], int(1), int(1));
        assert_eq!(f.fixed_point_in(&int(0), &int(4)), Some(int(3)));
        assert_eq!(f.fixed_point_in(&int(0), &int(2)), None);
        let p = f.fixed_point_in(&int(5), &int(9)).unwrap();
        assert!(p > int(5) && p <= int(9));
        let scale = PlAut::affine(int(2), int(-1)).unwrap();
        assert_eq!(scale.fixed_point_in(&int(-10), &int(10)), Some(int(1)));
        assert_eq!(
            PlAut::translation(int(1)).fixed_point_in(&int(-10), &int(10)),
            None
        );
    }

    #[test]
    fn compare_basics() {
        let w = QWellOrder::default();
        let f = pl(&[(0, 2), (3, 3)], int(1), int(1));
        assert_eq!(plaut_compare(&w, &f, &f, 100), Ok(Ordering::Equal));
        assert_eq!(
            first_difference(&w, &f, &f, 100),
            Err(PlError::Exhausted { cap: 100 })
        );
        let t = PlAut::translation(int(1));
        assert_eq!(
            first_difference(&w, &t, &PlAut::identity(), 10)
                .unwrap()
                .rank,
            0
        );
        assert_eq!(
            plaut_compare(&w, &PlAut::identity(), &t, 10),
            Ok(Ordering::Less)
        );
    }

    fn arb_plaut() -> impl Strategy<Value = PlAut> {
        (
            prop::collection::btree_set(-6i64..=6, 1..4),
            prop::collection::btree_set(-6i64..=6, 1..4),
            1i64..=3,
            1i64..=3,
        )
            .prop_map(|(xs, ys, l, r)| {
                let knots: Vec<_> = xs
                    .into_iter()
                    .zip(ys)
                    .map(|(x, y)| (rat(x, 2), int(y)))
                    .collect();
                PlAut::from_knots(knots, rat(l, 2), rat(r, 1)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn group_axioms(f in arb_plaut(), g in arb_plaut(), h in arb_plaut()) {
            prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
            prop_assert!(f.compose(&f.inverse()).is_identity());
            prop_assert_eq!(f.compose(&PlAut::identity()), f.clone());
            prop_assert!(f.compose(&g).is_increasing());
            for t in -8..=8 {
                let t = rat(t, 3);
                prop_assert_eq!(f.compose(&g).apply(&t), f.apply(&g.apply(&t)));
            }
        }

        #[test]
        fn order_is_left_invariant(f in arb_plaut(), g in arb_plaut(), h in arb_plaut()) {
            let w = QWellOrder::default();
            let before = plaut_compare(&w, &g, &h, 10_000).unwrap();
            let after = plaut_compare(&w, &f.compose(&g), &f.compose(&h), 10_000).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
