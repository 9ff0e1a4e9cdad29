use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{int, plaut_compare, PlAut, PlError, QWellOrder, Rational};

/// Which side of its fixed point an orbit stays on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitSide {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub k: i64,
    #[serde(with = "super::ratser")]
    pub value: Rational,
}

/// Evidence that `f^k(start)` stays strictly on one side of `fixed_point`
/// for every integer `k`.
///
/// The universal claim rests on two exactly checked facts: `f` fixes
/// `fixed_point`, and `f` is increasing. An increasing bijection maps each
/// side of a fixed point to itself, and so does its inverse. The samples
/// are a spot check of the conclusion, not part of the argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCertificate {
    pub map: PlAut,
    #[serde(with = "super::ratser")]
    pub start: Rational,
    #[serde(with = "super::ratser")]
    pub fixed_point: Rational,
    #[serde(with = "super::ratser")]
    pub fixed_image: Rational,
    pub increasing: bool,
    pub side: OrbitSide,
    pub samples: Vec<OrbitSample>,
}

fn on_side(side: OrbitSide, v: &Rational, p: &Rational) -> bool {
    match side {
        OrbitSide::Below => v < p,
        OrbitSide::Above => v > p,
    }
}

fn orbit_samples(f: &PlAut, start: &Rational, radius: u32) -> Vec<OrbitSample> {
    let inv = f.inverse();
    let mut samples = vec![OrbitSample {
        k: 0,
        value: start.clone(),
    }];
    for (map, sign) in [(f, 1i64), (&inv, -1i64)] {
        let mut v = start.clone();
        for k in 1..=i64::from(radius) {
            v = map.apply(&v);
            samples.push(OrbitSample {
                k: sign * k,
                value: v.clone(),
            });
        }
    }
    samples.sort_by_key(|s| s.k);
    samples
}

impl OrbitCertificate {
    /// Re-checks every recorded fact from scratch.
    pub fn verify(&self) -> Result<(), String> {
        let image = self.map.apply(&self.fixed_point);
        if image != self.fixed_point || image != self.fixed_image {
            return Err(format!("{} is not fixed", self.fixed_point));
        }
        if !self.map.is_increasing() || !self.increasing {
            return Err("map is not increasing".into());
        }
        if !on_side(self.side, &self.start, &self.fixed_point) {
            return Err(format!("start {} is on the wrong side", self.start));
        }
        let radius = self
            .samples
            .iter()
            .map(|s| s.k.unsigned_abs())
            .max()
            .unwrap_or(0);
        let recomputed = orbit_samples(&self.map, &self.start, radius as u32);
        if recomputed != self.samples {
            return Err("orbit samples do not match".into());
        }
        match self
            .samples
            .iter()
            .find(|s| !on_side(self.side, &s.value, &self.fixed_point))
        {
            Some(s) => Err(format!(
                "f^{}(start) = {} crosses the fixed point",
                s.k, s.value
            )),
            None => Ok(()),
        }
    }
}

fn build_orbit_certificate(
    f: &PlAut,
    start: &Rational,
    fixed_point: &Rational,
    side: OrbitSide,
    radius: u32,
) -> Result<OrbitCertificate, PlError> {
    let fixed_image = f.apply(fixed_point);
    if &fixed_image != fixed_point {
        return Err(PlError::NotFixed {
            point: fixed_point.clone(),
            image: fixed_image,
        });
    }
    if !on_side(side, start, fixed_point) {
        return Err(PlError::WrongSide {
            start: start.clone(),
            fixed_point: fixed_point.clone(),
        });
    }
    let cert = OrbitCertificate {
        map: f.clone(),
        start: start.clone(),
        fixed_point: fixed_point.clone(),
        fixed_image,
        increasing: f.is_increasing(),
        side,
        samples: orbit_samples(f, start, radius),
    };
    cert.verify().map_err(PlError::InvalidMap)?;
    Ok(cert)
}

/// Certifies `f^k(start) < fixed_point` for all `k ∈ Z`, with spot checks
/// for `|k| ≤ 50`.
pub fn orbit_bound_certificate(
    f: &PlAut,
    start: &Rational,
    fixed_point: &Rational,
) -> Result<OrbitCertificate, PlError> {
    orbit_bound_certificate_with(f, start, fixed_point, OrbitSide::Below, 50)
}

pub fn orbit_bound_certificate_with(
    f: &PlAut,
    start: &Rational,
    fixed_point: &Rational,
    side: OrbitSide,
    radius: u32,
) -> Result<OrbitCertificate, PlError> {
    build_orbit_certificate(f, start, fixed_point, side, radius)
}

/// Where `g` sits relative to the convex hull of `<f>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullSide {
    AboveHull,
    BelowHull,
}

/// Proof that `g` lies outside the convex hull of `<f>`.
///
/// Every rational of rank below `probe_rank` is fixed by both `f` and `g`,
/// so `f^k` and `g` agree there for every `k`. At `probe` the orbit
/// certificate keeps `f^k(probe)` strictly on one side of a fixed point that
/// is on the far side of (or equal to) `g(probe)`, so `probe` is the first
/// difference of `f^k` and `g` and the comparison comes out the same way for
/// every `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub probe_rank: u64,
    #[serde(with = "super::ratser")]
    pub probe: Rational,
    #[serde(with = "super::ratser")]
    pub g_value: Rational,
    pub position: HullSide,
    pub orbit: OrbitCertificate,
}

impl HullCertificate {
    pub fn verify(&self, order: &QWellOrder, f: &PlAut, g: &PlAut) -> Result<(), String> {
        if &self.orbit.map != f {
            return Err("orbit certificate is for a different map".into());
        }
        self.orbit.verify()?;
        if order.unrank(self.probe_rank) != self.probe || self.orbit.start != self.probe {
            return Err("probe does not match its rank".into());
        }
        for rank in 0..self.probe_rank {
            let t = order.unrank(rank);
            if f.apply(&t) != t || g.apply(&t) != t {
                return Err(format!("{t} (rank {rank}) is moved before the probe"));
            }
        }
        if g.apply(&self.probe) != self.g_value {
            return Err("recorded g(probe) is wrong".into());
        }
        let p = &self.orbit.fixed_point;
        let separated = match (self.position, self.orbit.side) {
            (HullSide::AboveHull, OrbitSide::Below) => p <= &self.g_value,
            (HullSide::BelowHull, OrbitSide::Above) => p >= &self.g_value,
            _ => false,
        };
        if separated {
            Ok(())
        } else {
            Err("fixed point does not separate the orbit from g(probe)".into())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HullMembership {
    /// `f^lower ⪯ g ⪯ f^upper`.
    In {
        lower: i64,
        upper: i64,
    },
    NotIn {
        certificate: Box<HullCertificate>,
    },
    Unknown {
        reason: String,
    },
}

/// Decides whether `g` lies in the convex hull of `<f>`.
///
/// Membership is found by comparing `g` with `f^k` for `|k| ≤ k_range`.
/// Non-membership is only ever reported with a [`HullCertificate`]; a
/// bounded search alone never concludes it.
pub fn hull_of_cyclic_membership(
    order: &QWellOrder,
    f: &PlAut,
    g: &PlAut,
    k_range: u32,
    search_cap: u64,
) -> Result<HullMembership, PlError> {
    if f.is_identity() {
        return Err(PlError::IdentityGenerator);
    }
    let k_range = i64::from(k_range);
    let increasing = plaut_compare(order, &PlAut::identity(), f, search_cap)? == Ordering::Less;
    let mut cmps = Vec::new();
    for k in -k_range..=k_range {
        cmps.push((k, plaut_compare(order, &f.pow(k), g, search_cap)?));
    }
    // Powers of f are monotone in k: increasing when id ≺ f, else decreasing.
    let below = cmps
        .iter()
        .filter(|(_, c)| *c != Ordering::Greater)
        .map(|(k, _)| *k);
    let above = cmps
        .iter()
        .filter(|(_, c)| *c != Ordering::Less)
        .map(|(k, _)| *k);
    let (lower, upper) = if increasing {
        (below.max(), above.min())
    } else {
        (below.min(), above.max())
    };
    if let (Some(lower), Some(upper)) = (lower, upper) {
        return Ok(HullMembership::In { lower, upper });
    }

    let Some((probe_rank, probe)) = (0..=search_cap)
        .map(|r| (r, order.unrank(r)))
        .find(|(_, t)| &f.apply(t) != t || &g.apply(t) != t)
    else {
        return Err(PlError::Exhausted { cap: search_cap });
    };
    let g_value = g.apply(&probe);
    let (position, orbit) = if g_value > probe {
        let Some(p) = f.fixed_point_in(&probe, &g_value) else {
            return Ok(HullMembership::Unknown {
                reason: format!("no fixed point of f in ({probe}, {g_value}]"),
            });
        };
        (
            HullSide::AboveHull,
            orbit_bound_certificate_with(f, &probe, &p, OrbitSide::Below, 50)?,
        )
    } else if g_value < probe {
        // Mirror t -> -t turns the search for a fixed point in [g(t), t) into
        // one in (-t, -g(t)].
        let Some(p) = f.mirror().fixed_point_in(&-&probe, &-&g_value).map(|p| -p) else {
            return Ok(HullMembership::Unknown {
                reason: format!("no fixed point of f in [{g_value}, {probe})"),
            });
        };
        (
            HullSide::BelowHull,
            orbit_bound_certificate_with(f, &probe, &p, OrbitSide::Above, 50)?,
        )
    } else {
        return Ok(HullMembership::Unknown {
            reason: format!("g fixes the first moved point {probe}"),
        });
    };
    let certificate = HullCertificate {
        probe_rank,
        probe,
        g_value,
        position,
        orbit,
    };
    certificate
        .verify(order, f, g)
        .map_err(PlError::InvalidMap)?;
    Ok(HullMembership::NotIn {
        certificate: Box::new(certificate),
    })
}

/// Points `a < b < c < d < e` and maps `f`, `g` with `f(a) = c`, `f(d) = d`,
/// `g(a) = b`, `g(b) = e`, where `a` is the first rational of the
/// well-order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCounterexample {
    #[serde(with = "super::ratser")]
    pub a: Rational,
    #[serde(with = "super::ratser")]
    pub b: Rational,
    #[serde(with = "super::ratser")]
    pub c: Rational,
    #[serde(with = "super::ratser")]
    pub d: Rational,
    #[serde(with = "super::ratser")]
    pub e: Rational,
    pub f: PlAut,
    pub g: PlAut,
}

impl HullCounterexample {
    /// Each defining constraint with whether it holds exactly.
    pub fn constraints(&self, order: &QWellOrder) -> Vec<(&'static str, bool)> {
        let HullCounterexample {
            a,
            b,
            c,
            d,
            e,
            f,
            g,
        } = self;
        vec![
            (
                "a = first rational of the well-order",
                &order.unrank(0) == a,
            ),
            ("a < b < c < d < e", a < b && b < c && c < d && d < e),
            ("f(a) = c", &f.apply(a) == c),
            ("f(d) = d", &f.apply(d) == d),
            ("g(a) = b", &g.apply(a) == b),
            ("g(b) = e", &g.apply(b) == e),
            ("g²(a) = e", &g.apply(&g.apply(a)) == e),
        ]
    }
}

/// `a, b, c, d, e = 0, 1, 2, 3, 4`;
/// `f`: `t + 2` up to 0, then linear `0 ↦ 2`, `3 ↦ 3`, identity from 3;
/// `g`: `t + 1` up to 0, then linear `0 ↦ 1`, `1 ↦ 4`, `t + 3` from 1.
pub fn example22_build(order: &QWellOrder) -> HullCounterexample {
    let a = order.unrank(0);
    let f = PlAut::from_knots(vec![(int(0), int(2)), (int(3), int(3))], int(1), int(1))
        .expect("f is increasing");
    let g = PlAut::from_knots(vec![(int(0), int(1)), (int(1), int(4))], int(1), int(1))
        .expect("g is increasing");
    HullCounterexample {
        a,
        b: int(1),
        c: int(2),
        d: int(3),
        e: int(4),
        f,
        g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plaut::{first_difference, rat};

    fn setup() -> (QWellOrder, HullCounterexample) {
        let order = QWellOrder::default();
        let ex = example22_build(&order);
        (order, ex)
    }

    #[test]
    fn constraints_hold() {
        let (order, ex) = setup();
        for (name, ok) in ex.constraints(&order) {
            assert!(ok, "{name}");
        }
        assert_eq!(ex.a, int(0));
    }

    #[test]
    fn comparisons() {
        let (order, ex) = setup();
        assert_eq!(
            first_difference(&order, &ex.f, &ex.g, 10).unwrap().point,
            ex.a
        );
        assert_eq!(plaut_compare(&order, &ex.g, &ex.f, 10), Ok(Ordering::Less));
        assert_eq!(
            plaut_compare(&order, &PlAut::identity(), &ex.g, 10),
            Ok(Ordering::Less)
        );
        assert_eq!(plaut_compare(&order, &ex.f, &ex.f, 10), Ok(Ordering::Equal));
    }

    #[test]
    fn orbit_certificates() {
        let (_, ex) = setup();
        let cert = orbit_bound_certificate(&ex.f, &ex.a, &ex.d).unwrap();
        assert_eq!(cert.samples.len(), 101);
        assert!(cert.samples.iter().all(|s| s.value < ex.e));
        cert.verify().unwrap();

        let id = orbit_bound_certificate(&PlAut::identity(), &int(0), &int(1)).unwrap();
        assert!(id.samples.iter().all(|s| s.value == int(0)));

        assert!(matches!(
            orbit_bound_certificate(&ex.f, &ex.d, &ex.d),
            Err(PlError::WrongSide { .. })
        ));
        assert!(matches!(
            orbit_bound_certificate(&ex.f, &ex.a, &int(1)),
            Err(PlError::NotFixed { .. })
        ));
    }

    #[test]
    fn tampered_certificate_fails() {
        let (_, ex) = setup();
        let mut cert = orbit_bound_certificate(&ex.f, &ex.a, &ex.d).unwrap();
        cert.fixed_point = int(2);
        assert!(cert.verify().is_err());
    }

    #[test]
    fn hull_membership() {
        let (order, ex) = setup();
        assert_eq!(
            hull_of_cyclic_membership(&order, &ex.f, &ex.g, 10, 100),
            Ok(HullMembership::In { lower: 0, upper: 1 })
        );
        assert_eq!(
            hull_of_cyclic_membership(&order, &ex.f, &ex.f, 10, 100),
            Ok(HullMembership::In { lower: 1, upper: 1 })
        );
        let g2 = ex.g.compose(&ex.g);
        let res = hull_of_cyclic_membership(&order, &ex.f, &g2, 10, 100).unwrap();
        let HullMembership::NotIn { certificate } = res else {
            panic!("{res:?}")
        };
        assert_eq!(certificate.position, HullSide::AboveHull);
        assert_eq!(
            (&certificate.orbit.start, &certificate.orbit.fixed_point),
            (&ex.a, &ex.d)
        );
        certificate.verify(&order, &ex.f, &g2).unwrap();
        assert_eq!(
            hull_of_cyclic_membership(&order, &PlAut::identity(), &ex.g, 10, 100),
            Err(PlError::IdentityGenerator)
        );
    }

    #[test]
    fn below_hull_by_mirror() {
        let order = QWellOrder::default();
        // Fixes everything up to -3, moves 0 to 2.
        let f =
            PlAut::from_knots(vec![(int(-3), int(-3)), (int(0), int(2))], int(1), int(1)).unwrap();
        let g = PlAut::translation(int(-10));
        let res = hull_of_cyclic_membership(&order, &f, &g, 10, 100).unwrap();
        let HullMembership::NotIn { certificate } = res else {
            panic!("{res:?}")
        };
        assert_eq!(certificate.position, HullSide::BelowHull);
        assert_eq!(certificate.orbit.fixed_point, int(-3));
        certificate.verify(&order, &f, &g).unwrap();
        for k in -10..=10 {
            assert_eq!(
                plaut_compare(&order, &g, &f.pow(k), 100),
                Ok(Ordering::Less)
            );
        }
    }

    #[test]
    fn decreasing_generator() {
        let (order, ex) = setup();
        let f_inv = ex.f.inverse();
        assert_eq!(
            hull_of_cyclic_membership(&order, &f_inv, &ex.g, 10, 100),
            Ok(HullMembership::In {
                lower: 0,
                upper: -1
            })
        );
    }

    #[test]
    fn unknown_without_fixed_point() {
        let order = QWellOrder::default();
        let f = PlAut::translation(rat(1, 3));
        let g = PlAut::translation(int(100));
        let res = hull_of_cyclic_membership(&order, &f, &g, 5, 100).unwrap();
        assert!(matches!(res, HullMembership::Unknown { .. }));
    }
}
