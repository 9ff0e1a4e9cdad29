use std::cmp::Ordering;
use std::collections::HashSet;

use leftorder_core::group::{
    abelianize, index_pair_check_with, kb_center_description, kb_inv, kb_mul, presburger,
    AffineAction, CosetIndex, KbElement, KbSubgroup,
};
use leftorder_core::order::{interval_coset_cover, kb_compare, CoverResult};
use leftorder_core::pattern::{
    build_free_chain_pattern, build_kb_depth2, chain_nonmembership_certificate, check_verdict,
    verify_pattern_with, PatternInstance, Verdict, VerifyOptions,
};
use leftorder_core::plaut::{
    example22_build, hull_of_cyclic_membership, orbit_bound_certificate_with, plaut_compare,
    HullMembership, OrbitSide, PlAut, QWellOrder,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::options::{DemoOptions, Inputs};
use crate::registry::{Demo, DemoError};
use crate::report::{Report, WitnessTable};

pub(crate) fn all() -> Vec<Box<dyn Demo>> {
    vec![
        Box::new(KbAxioms),
        Box::new(KbPattern),
        Box::new(KbCoverFails),
        Box::new(PresburgerIso),
        Box::new(PlautHull),
        Box::new(FreeChain),
        Box::new(IndexPairs),
    ]
}

fn failed(e: impl std::fmt::Display) -> DemoError {
    DemoError::Failed(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("core types serialize")
}

/// Uniform sample in `[-bound, bound]`, as a big integer.
fn sample(rng: &mut ChaCha8Rng, bound: u64) -> BigInt {
    let b = i128::from(bound);
    BigInt::from(rng.gen_range(-b..=b))
}

fn random_element(rng: &mut ChaCha8Rng, bound: u64) -> KbElement {
    KbElement {
        n: sample(rng, bound),
        m: sample(rng, bound),
    }
}

const DEFAULT_MAGNITUDE: u64 = 1_000_000_000_000_000_000;
const DEFAULT_CAP: u64 = 10_000;
const MAX_SAMPLES: u64 = 1_000_000;
const SHOWN_SAMPLES: usize = 5;

struct KbAxioms;

impl Demo for KbAxioms {
    fn name(&self) -> &'static str {
        "kb-axioms"
    }

    fn anchor(&self) -> &'static str {
        "Klein bottle group <x, y | x^-1 y x = y^-1> in normal form x^n y^m with the lexicographic left-order"
    }

    fn describe(&self) -> &'static str {
        "group laws, affine-action oracle, defining relation and left-invariance on seeded random samples"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let count = opts.get("cap", DEFAULT_CAP, MAX_SAMPLES)?;
        let bound = opts.get("bound", DEFAULT_MAGNITUDE, u64::MAX)?;
        let mut inputs = Inputs::default();
        inputs
            .set("samples", count)
            .set("bound", bound.to_string())
            .set("seed", opts.seed);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());

        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let triples: Vec<_> = (0..count)
            .map(|_| {
                (
                    random_element(&mut rng, bound),
                    random_element(&mut rng, bound),
                    random_element(&mut rng, bound),
                )
            })
            .collect();
        let e = KbElement::identity();
        let fails = |pred: &dyn Fn(&KbElement, &KbElement, &KbElement) -> bool| {
            triples.iter().filter(|(a, b, c)| !pred(a, b, c)).count()
        };
        let assoc = fails(&|a, b, c| kb_mul(&kb_mul(a, b), c) == kb_mul(a, &kb_mul(b, c)));
        let ident = fails(&|a, _, _| kb_mul(a, &e) == *a && kb_mul(&e, a) == *a);
        let inverse = fails(&|a, _, _| kb_mul(a, &kb_inv(a)).is_identity());
        let affine = fails(&|a, b, _| {
            AffineAction::of(a).then(&AffineAction::of(b)) == AffineAction::of(&kb_mul(a, b))
        });
        let left = fails(&|a, b, c| kb_compare(&kb_mul(c, a), &kb_mul(c, b)) == kb_compare(a, b));
        for (name, n) in [
            ("associativity", assoc),
            ("identity", ident),
            ("inverses", inverse),
            ("agrees with affine action", affine),
            ("left-invariance of the order", left),
        ] {
            r.check(name, n == 0, format!("{n} failures in {count} samples"));
        }

        let (x, y) = (KbElement::x(), KbElement::y());
        let conj = kb_mul(&kb_mul(&kb_inv(&x), &y), &x);
        r.check(
            "x^-1 y x = y^-1",
            conj == kb_inv(&y),
            format!("x^-1 y x = {conj}"),
        );
        let (a, b) = (KbElement::y(), KbElement::new(0, 2));
        let (ax, bx) = (kb_mul(&a, &x), kb_mul(&b, &x));
        let right_fails =
            kb_compare(&a, &b) == Ordering::Less && kb_compare(&ax, &bx) == Ordering::Greater;
        r.check(
            "order is not right-invariant",
            right_fails,
            format!("{a} < {b} but {a}·x = {ax} > {bx} = {b}·x"),
        );

        r.witnesses = WitnessTable {
            columns: vec!["a".into(), "b".into(), "c".into(), "(ab)c".into()],
            rows: triples
                .iter()
                .take(SHOWN_SAMPLES)
                .map(|(a, b, c)| {
                    vec![
                        a.to_string(),
                        b.to_string(),
                        c.to_string(),
                        kb_mul(&kb_mul(a, b), c).to_string(),
                    ]
                })
                .collect(),
        };
        r.result = json!({
            "samples": count,
            "failures": { "associativity": assoc, "identity": ident, "inverses": inverse, "affine": affine, "left_invariance": left },
            "right_invariance_counterexample": { "a": to_json(&a), "b": to_json(&b), "c": to_json(&x), "ac": to_json(&ax), "bc": to_json(&bx) },
        });
        r.summary = format!("{count} random triples checked");
        Ok(r)
    }
}

/// Builds the witness table and report fields shared by pattern runs.
fn pattern_report(r: &mut Report, p: &PatternInstance, verdict: &Verdict, expect: &str) {
    let opts = VerifyOptions::default();
    match verdict {
        Verdict::Verified {
            row_certificates,
            witnesses,
        } => {
            for (i, cert) in row_certificates.iter().enumerate() {
                r.check(
                    format!("row {i} is {}-inconsistent", cert.k),
                    true,
                    format!("{} disjoint pairs certified", cert.pairs.len()),
                );
            }
            r.check(
                "every path has a witness",
                witnesses.len() == p.path_count(),
                format!("{} of {} paths", witnesses.len(), p.path_count()),
            );
            r.witnesses = WitnessTable {
                columns: vec!["path".into(), "witness".into(), "checks".into()],
                rows: witnesses
                    .iter()
                    .map(|w| {
                        let path = w
                            .path
                            .iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join(",");
                        let checks = vec!["member"; w.memberships.len()].join(",");
                        vec![format!("({path})"), w.element.to_string(), checks]
                    })
                    .collect(),
            };
        }
        Verdict::Refuted { reason } => {
            r.check(
                "refutation",
                true,
                serde_json::to_string(reason).expect("refutations serialize"),
            );
        }
        Verdict::Unknown { inconclusive } => {
            r.check("inconclusive checks", true, inconclusive.join("; "));
        }
    }
    let recheck = check_verdict(p, verdict, &opts);
    r.check(
        "verdict re-validated",
        recheck.is_ok(),
        recheck.err().unwrap_or_default(),
    );
    r.check(
        "verdict",
        verdict.name() == expect,
        format!("{} (expected {expect})", verdict.name()),
    );
    r.summary = format!("{} on a {:?} grid", verdict.name(), p.grid());
    r.result = json!({ "pattern": to_json(p), "verdict": to_json(verdict) });
}

struct KbPattern;

impl Demo for KbPattern {
    fn name(&self) -> &'static str {
        "kb-pattern"
    }

    fn anchor(&self) -> &'static str {
        "depth-2 pattern in the Klein bottle group: intervals [x^k, x^k y^(n-1)] against right cosets <x> y^j"
    }

    fn describe(&self) -> &'static str {
        "builds the interval/coset pattern on a cols x cols grid and verifies it with certificates"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let depth = opts.get("depth", 2, 2)?;
        let cols = opts.get("cols", 8, 64)?;
        if cols < 2 {
            return Err(DemoError::InvalidOption {
                name: "cols",
                reason: "need at least 2 columns".into(),
            });
        }
        let mut inputs = Inputs::default();
        inputs
            .set("depth", depth)
            .set("n_cols", cols)
            .set("j_cols", cols);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());
        let p = build_kb_depth2(cols, cols).map_err(failed)?;
        let verdict = verify_pattern_with(&p, &VerifyOptions::default());
        pattern_report(&mut r, &p, &verdict, "verified");
        Ok(r)
    }
}

struct KbCoverFails;

impl Demo for KbCoverFails {
    fn name(&self) -> &'static str {
        "kb-cover-fails"
    }

    fn anchor(&self) -> &'static str {
        "covering [e, x] by finitely many right cosets of the center <x^2> is impossible"
    }

    fn describe(&self) -> &'static str {
        "asks for a cover of [e, x] by at most cap cosets of the center and validates the infinite witness family"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let budget = opts.get("cap", 100, u64::MAX)?;
        let count = opts.get("bound", 200, 100_000)?;
        let x = KbElement::x();
        let center = kb_center_description();
        let mut inputs = Inputs::default();
        inputs
            .set("upper", x.to_string())
            .set("subgroup", center.to_string())
            .set("budget", budget)
            .set("witnesses", count);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());
        let cover = interval_coset_cover(&x, &center, budget).map_err(failed)?;
        let CoverResult::InfiniteWitness { family } = &cover else {
            r.check("no finite cover exists", false, format!("got {cover:?}"));
            r.summary = "unexpected cover result".into();
            r.result = json!({ "cover": to_json(&cover) });
            return Ok(r);
        };
        r.check(
            "no finite cover exists",
            true,
            "cover search returned an infinite witness family",
        );
        let validated = family.validate(count as usize);
        let items = validated.as_ref().cloned().unwrap_or_default();
        r.check(
            "witnesses lie in [e, x] in pairwise distinct cosets",
            validated.is_ok(),
            validated
                .err()
                .unwrap_or_else(|| format!("{count} witnesses")),
        );
        r.witnesses = WitnessTable {
            columns: vec!["index".into(), "element".into(), "coset key".into()],
            rows: items
                .iter()
                .map(|w| {
                    vec![
                        w.index.to_string(),
                        w.element.to_string(),
                        format!("({}, {})", w.key.n, w.key.m),
                    ]
                })
                .collect(),
        };
        r.summary = format!(
            "infinitely many cosets of {center} meet [e, x]; {} validated",
            items.len()
        );
        r.result = json!({ "cover": to_json(&cover), "witnesses": to_json(&items) });
        Ok(r)
    }
}

struct PresburgerIso;

impl Demo for PresburgerIso {
    fn name(&self) -> &'static str {
        "presburger-iso"
    }

    fn anchor(&self) -> &'static str {
        "a copy of the Klein bottle group definable in (Z, <, +)"
    }

    fn describe(&self) -> &'static str {
        "checks iso(gh) = iso(g) ⊕ iso(h) for the interpreted operation on seeded random pairs"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let count = opts.get("cap", DEFAULT_CAP, MAX_SAMPLES)?;
        let bound = opts.get("bound", DEFAULT_MAGNITUDE, u64::MAX)?;
        let mut inputs = Inputs::default();
        inputs
            .set("samples", count)
            .set("bound", bound.to_string())
            .set("seed", opts.seed);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let pairs: Vec<_> = (0..count)
            .map(|_| {
                (
                    random_element(&mut rng, bound),
                    random_element(&mut rng, bound),
                )
            })
            .collect();
        let outcome = presburger::check(pairs.iter().map(|(g, h)| (g, h)));
        match &outcome {
            Ok(n) => r.check("homomorphism", true, format!("{n} pairs, 0 violations")),
            Err(v) => r.check(
                "homomorphism",
                false,
                format!("violation at {} · {}", v.left, v.right),
            ),
        }
        let show = |p: &presburger::Point| format!("({}, {})", p.0, p.1);
        r.witnesses = WitnessTable {
            columns: vec![
                "g".into(),
                "h".into(),
                "iso(gh)".into(),
                "iso(g) ⊕ iso(h)".into(),
            ],
            rows: pairs
                .iter()
                .take(SHOWN_SAMPLES)
                .map(|(g, h)| {
                    let via_group = presburger::iso(&kb_mul(g, h));
                    let via_op = presburger::op(&presburger::iso(g), &presburger::iso(h));
                    vec![
                        g.to_string(),
                        h.to_string(),
                        show(&via_group),
                        show(&via_op),
                    ]
                })
                .collect(),
        };
        r.summary = format!("carrier {}", presburger::CARRIER);
        r.result = json!({
            "carrier": presburger::CARRIER,
            "samples": count,
            "violation": outcome.err().map(|v| json!({ "left": to_json(&v.left), "right": to_json(&v.right) })),
        });
        Ok(r)
    }
}

struct PlautHull;

impl Demo for PlautHull {
    fn name(&self) -> &'static str {
        "plaut-hull"
    }

    fn anchor(&self) -> &'static str {
        "the convex hull of a cyclic subgroup of Aut(Q) need not be a subgroup"
    }

    fn describe(&self) -> &'static str {
        "builds f, g with f(a) = c, f(d) = d, g(a) = b, g(b) = e and shows g is in the hull of <f> while g^2 is not"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let cap = opts.get("cap", DEFAULT_CAP, 10_000_000)?;
        let radius = opts.get("bound", 50, 1_000)?;
        let mut inputs = Inputs::default();
        inputs.set("search_cap", cap).set("orbit_radius", radius);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());
        let order = QWellOrder::default();
        let ex = example22_build(&order);
        for (name, ok) in ex.constraints(&order) {
            r.check(name, ok, "");
        }
        let cmp_gf = plaut_compare(&order, &ex.g, &ex.f, cap).map_err(failed)?;
        let cmp_id = plaut_compare(&order, &PlAut::identity(), &ex.g, cap).map_err(failed)?;
        r.check("g ≺ f", cmp_gf == Ordering::Less, format!("{cmp_gf:?}"));
        r.check("id ≺ g", cmp_id == Ordering::Less, format!("{cmp_id:?}"));
        let g_hull = hull_of_cyclic_membership(&order, &ex.f, &ex.g, 10, cap).map_err(failed)?;
        r.check(
            "g in hull(<f>)",
            g_hull == HullMembership::In { lower: 0, upper: 1 },
            format!("{g_hull:?}"),
        );
        let g2 = ex.g.compose(&ex.g);
        let g2_hull = hull_of_cyclic_membership(&order, &ex.f, &g2, 10, cap).map_err(failed)?;
        let cert_ok = match &g2_hull {
            HullMembership::NotIn { certificate } => certificate.verify(&order, &ex.f, &g2),
            other => Err(format!("{other:?}")),
        };
        r.check(
            "g^2 outside hull(<f>) with certificate",
            cert_ok.is_ok(),
            cert_ok.err().unwrap_or_default(),
        );
        let orbit =
            orbit_bound_certificate_with(&ex.f, &ex.a, &ex.d, OrbitSide::Below, radius as u32)
                .map_err(failed)?;
        let below = orbit.samples.iter().filter(|s| s.value < ex.e).count();
        r.check(
            "f^k(a) < e",
            below == orbit.samples.len() && orbit.verify().is_ok(),
            format!(
                "{below} of {} samples, k in [-{radius}, {radius}]",
                orbit.samples.len()
            ),
        );
        r.witnesses = WitnessTable {
            columns: vec!["k".into(), "f^k(a)".into()],
            rows: orbit
                .samples
                .iter()
                .map(|s| vec![s.k.to_string(), s.value.to_string()])
                .collect(),
        };
        r.summary = "g ∈ hull(<f>), g^2 ∉ hull(<f>), so the hull is not a subgroup".into();
        r.result = json!({
            "construction": to_json(&ex),
            "g": to_json(&g_hull),
            "g_squared": to_json(&g2_hull),
            "orbit": to_json(&orbit),
        });
        Ok(r)
    }
}

struct FreeChain;

impl Demo for FreeChain {
    fn name(&self) -> &'static str {
        "free-chain"
    }

    fn anchor(&self) -> &'static str {
        "chain pattern in free groups: cells D_0 ... {x_i^(j+1)} ... D_n with D_l = {x_l^m : m >= 0}"
    }

    fn describe(&self) -> &'static str {
        "builds the free-group chain pattern of the given depth and verifies it; certifies the abelianization gaps"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let depth = opts.get("depth", 3, 6)?;
        let cols = opts.get("cols", 3, 8)?;
        let bound = opts.get("bound", 5, 50)?;
        if depth < 2 || cols < 2 {
            return Err(DemoError::InvalidOption {
                name: "depth",
                reason: "need depth >= 2 and cols >= 2".into(),
            });
        }
        if cols.pow(depth as u32) > 100_000 {
            return Err(DemoError::InvalidOption {
                name: "cols",
                reason: format!("{cols}^{depth} paths is too many"),
            });
        }
        let n = (depth - 1) as usize;
        let mut inputs = Inputs::default();
        inputs
            .set("depth", depth)
            .set("n", n)
            .set("cols", cols)
            .set("exponent_bound", bound);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());

        let mut certs = 0;
        let mut bad = Vec::new();
        for i in 0..=n {
            for m0 in 1..=bound as i64 {
                for m1 in (1..=bound as i64).filter(|&m1| m1 != m0) {
                    match chain_nonmembership_certificate(n, i, m0, m1) {
                        Ok(c) if c.verify() => certs += 1,
                        _ => bad.push((i, m0, m1)),
                    }
                }
            }
        }
        r.check(
            "x_i^m0 x_i^-m1 outside the chain set",
            bad.is_empty(),
            format!("{certs} certificates, {} failures", bad.len()),
        );
        let sample = chain_nonmembership_certificate(n, 0, 1, 2).map_err(failed)?;

        let p = build_free_chain_pattern(n, cols as usize).map_err(failed)?;
        let verdict = verify_pattern_with(&p, &VerifyOptions::default());
        if let Verdict::Verified { witnesses, .. } = &verdict {
            let images: HashSet<String> = witnesses
                .iter()
                .filter_map(|w| w.element.as_free())
                .map(|w| abelianize(w).to_string())
                .collect();
            r.check(
                "witnesses distinct under abelianization",
                images.len() == witnesses.len(),
                format!("{} distinct", images.len()),
            );
        }
        pattern_report(&mut r, &p, &verdict, "verified");
        if let serde_json::Value::Object(m) = &mut r.result {
            m.insert("sample_certificate".into(), to_json(&sample));
        }
        Ok(r)
    }
}

struct IndexPairs;

impl Demo for IndexPairs {
    fn name(&self) -> &'static str {
        "index-pairs"
    }

    fn anchor(&self) -> &'static str {
        "indices [H : H∩K] and [K : H∩K] for subgroups of the Klein bottle group"
    }

    fn describe(&self) -> &'static str {
        "computes index pairs with coset representatives for a fixed list of subgroup pairs"
    }

    fn run(&self, opts: &DemoOptions) -> Result<Report, DemoError> {
        let evidence = opts.get("bound", 8, 1_000)? as usize;
        let mut inputs = Inputs::default();
        inputs.set("evidence", evidence);
        let mut r = Report::new(self.name(), self.anchor(), inputs.into_map());
        let inf = CosetIndex::Infinite;
        let cases = [
            (KbSubgroup::x_axis(), KbSubgroup::y_axis(), (inf, inf)),
            (
                KbSubgroup::Full,
                KbSubgroup::centralizer_of_y(),
                (CosetIndex::Finite(2), CosetIndex::Finite(1)),
            ),
            (
                kb_center_description(),
                KbSubgroup::x_axis(),
                (CosetIndex::Finite(1), CosetIndex::Finite(2)),
            ),
            (
                KbSubgroup::centralizer_of_y(),
                KbSubgroup::x_axis(),
                (inf, CosetIndex::Finite(2)),
            ),
        ];
        let mut results = Vec::new();
        let mut rows = Vec::new();
        for (h, k, expected) in cases {
            let pair = index_pair_check_with(&h, &k, evidence);
            let distinct = [&pair.first_representatives, &pair.second_representatives]
                .iter()
                .all(|reps| {
                    reps.iter().enumerate().all(|(i, a)| {
                        reps[..i]
                            .iter()
                            .all(|b| !pair.intersection.same_right_coset(a, b))
                    })
                });
            let label = format!("({h}, {k})");
            let detail = format!(
                "({}, {}), meet {}",
                pair.first, pair.second, pair.intersection
            );
            r.check(
                label.clone(),
                (pair.first, pair.second) == expected && distinct,
                detail,
            );
            let reps = |v: &[KbElement]| {
                v.iter()
                    .map(KbElement::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            rows.push(vec![
                label,
                pair.intersection.to_string(),
                pair.first.to_string(),
                pair.second.to_string(),
                reps(&pair.first_representatives),
                reps(&pair.second_representatives),
            ]);
            results.push(json!({ "h": to_json(&h), "k": to_json(&k), "pair": to_json(&pair) }));
        }
        r.witnesses = WitnessTable {
            columns: ["pair", "H∩K", "[H:H∩K]", "[K:H∩K]", "H reps", "K reps"]
                .map(String::from)
                .to_vec(),
            rows,
        };
        r.summary = "index pairs with distinct-coset representatives".into();
        r.result = json!({ "pairs": results });
        Ok(r)
    }
}

/// Verifies a pattern read from a file and reports whether the verdict is
/// the expected one.
pub fn verify_report(p: &PatternInstance, expect: &str, source: &str) -> Report {
    let mut inputs = Inputs::default();
    inputs
        .set("source", source)
        .set("expect", expect)
        .set("grid", to_json(&p.grid()));
    let mut r = Report::new(
        "verify",
        "finite-depth pattern verification",
        inputs.into_map(),
    );
    let verdict = verify_pattern_with(p, &VerifyOptions::default());
    pattern_report(&mut r, p, &verdict, expect);
    r
}
