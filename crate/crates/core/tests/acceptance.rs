//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p leftorder-core --test acceptance`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use leftorder_core::group::{
    abelianize, index_pair_check, kb_center_description, kb_centralizer_membership, kb_inv, kb_mul,
    presburger, AffineAction, CosetIndex, KbElement, KbSubgroup,
};
use leftorder_core::order::{interval_coset_cover, kb_compare, CoverResult, KbInterval};
use leftorder_core::pattern::{
    build_free_chain_pattern, build_kb_depth2, chain_nonmembership_certificate, check_verdict,
    verify_pattern, DefSet, PatternInstance, Row, Verdict, VerifyOptions,
};
use leftorder_core::plaut::{
    example22_build, hull_of_cyclic_membership, orbit_bound_certificate, plaut_compare,
    HullMembership, PlAut, QWellOrder,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

const BIG: i64 = 1_000_000_000_000_000_000;

fn random_element(rng: &mut ChaCha8Rng, bound: i64) -> KbElement {
    KbElement::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

fn group_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<_> = (0..100_000)
        .map(|_| {
            (
                random_element(&mut rng, BIG),
                random_element(&mut rng, BIG),
                random_element(&mut rng, BIG),
            )
        })
        .collect();
    let start = Instant::now();
    let e = KbElement::identity();
    for (a, b, c) in &samples {
        ensure(kb_mul(&kb_mul(a, b), c) == kb_mul(a, &kb_mul(b, c)), || {
            format!("associativity at {a}, {b}, {c}")
        })?;
        ensure(kb_mul(a, &e) == *a && kb_mul(&e, a) == *a, || {
            format!("identity at {a}")
        })?;
        ensure(
            kb_mul(a, &kb_inv(a)).is_identity() && kb_mul(&kb_inv(a), a).is_identity(),
            || format!("inverse at {a}"),
        )?;
        let composed = AffineAction::of(a).then(&AffineAction::of(b));
        ensure(composed == AffineAction::of(&kb_mul(a, b)), || {
            format!("affine oracle at {a}, {b}")
        })?;
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("100000 triples, 0 failures, {took:.2?}"))
}

fn identities() -> Outcome {
    let (x, y) = (KbElement::x(), KbElement::y());
    ensure(kb_mul(&kb_mul(&kb_inv(&x), &y), &x) == kb_inv(&y), || {
        "x^-1 y x != y^-1".into()
    })?;
    for n in -20..=20 {
        for m in -20..=20 {
            let g = KbElement::new(n, m);
            ensure(kb_centralizer_membership(&x, &g) == (m == 0), || {
                format!("C(x) criterion at {g}")
            })?;
        }
    }
    let lattice = KbSubgroup::centralizer_of_y();
    ensure(lattice == KbSubgroup::Lattice(2, 1), || {
        "C(y) is not Lattice(2,1)".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let g = random_element(&mut rng, BIG);
        ensure(lattice.contains(&kb_mul(&g, &g)), || {
            format!("{g} squared outside Lattice(2,1)")
        })?;
    }
    for m in -100..=100 {
        let g = KbElement::new(1, m);
        ensure(kb_mul(&g, &g) == KbElement::new(2, 0), || {
            format!("(1,{m})^2 != (2,0)")
        })?;
    }
    Ok("defining relation, C(x), 10000 squares, 201 squares of (1,m)".into())
}

fn left_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (a, b, c) = (
            random_element(&mut rng, BIG),
            random_element(&mut rng, BIG),
            random_element(&mut rng, BIG),
        );
        ensure(
            kb_compare(&kb_mul(&c, &a), &kb_mul(&c, &b)) == kb_compare(&a, &b),
            || format!("left-invariance fails at {a}, {b}, {c}"),
        )?;
    }
    let (a, b, c) = (KbElement::y(), KbElement::new(0, 2), KbElement::x());
    ensure(
        kb_compare(&a, &b) == Ordering::Less
            && kb_compare(&kb_mul(&a, &c), &kb_mul(&b, &c)) == Ordering::Greater,
        || "expected right-invariance failure not found".into(),
    )?;
    Ok(format!(
        "10000 triples; right-invariance fails: {a} < {b} but {a}·{c} > {b}·{c}"
    ))
}

// Brute-force oracle for the depth-2 pattern on plain integer pairs.
fn brute_force_depth2(n_cols: i64, j_cols: i64, r: i64) -> bool {
    let in_interval = |k: i64, g: (i64, i64)| (k, 0) <= g && g <= (k, j_cols - 1);
    let in_coset = |j: i64, g: (i64, i64)| g.1 == j;
    let pts: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|n| (-r..=r).map(move |m| (n, m)))
        .collect();
    let row0 = pts
        .iter()
        .all(|&g| (0..n_cols).filter(|&k| in_interval(k, g)).count() < 2);
    let row1 = pts
        .iter()
        .all(|&g| (0..j_cols).filter(|&j| in_coset(j, g)).count() < 2);
    let paths = (0..n_cols)
        .all(|k| (0..j_cols).all(|j| pts.iter().any(|&g| in_interval(k, g) && in_coset(j, g))));
    row0 && row1 && paths
}

fn depth2_pattern() -> Outcome {
    let start = Instant::now();
    let p = build_kb_depth2(32, 32).map_err(|e| e.to_string())?;
    let v = verify_pattern(&p);
    check_verdict(&p, &v, &VerifyOptions::default())?;
    let took = within(start, Duration::from_secs(1))?;
    let Verdict::Verified {
        witnesses,
        row_certificates,
    } = &v
    else {
        return Err(format!("32x32 verdict is {}", v.name()));
    };
    ensure(
        witnesses.len() == 1024 && row_certificates.len() == 2,
        || "wrong witness/certificate count".into(),
    )?;
    for w in witnesses {
        let expected = KbElement::new(w.path[0] as i64, w.path[1] as i64);
        ensure(w.element.as_kb() == Some(&expected), || {
            format!("path {:?} witness {}", w.path, w.element)
        })?;
    }
    let small = verify_pattern(&build_kb_depth2(4, 4).map_err(|e| e.to_string())?);
    ensure(small.is_verified() == brute_force_depth2(4, 4, 40), || {
        "brute force disagrees on 4x4".into()
    })?;
    ensure(small.is_verified(), || "4x4 not verified".into())?;
    Ok(format!("1024 witnesses re-validated, 2 rows certified, {took:.2?}; 4x4 brute force over |n|,|m|<=40 agrees"))
}

fn cover_fails() -> Outcome {
    let center = kb_center_description();
    let res = interval_coset_cover(&KbElement::x(), &center, 100).map_err(|e| e.to_string())?;
    let CoverResult::InfiniteWitness { family } = res else {
        return Err(format!("expected an infinite witness, got {res:?}"));
    };
    let items = family.validate(200)?;
    Ok(format!(
        "{} elements of [e,x] in pairwise distinct cosets of {center}",
        items.len()
    ))
}

fn plaut_counterexample() -> Outcome {
    let start = Instant::now();
    let order = QWellOrder::default();
    let ex = example22_build(&order);
    for (name, ok) in ex.constraints(&order) {
        ensure(ok, || format!("constraint {name} fails"))?;
    }
    let cap = 1000;
    ensure(
        plaut_compare(&order, &ex.g, &ex.f, cap) == Ok(Ordering::Less),
        || "g ≺ f fails".into(),
    )?;
    ensure(
        plaut_compare(&order, &PlAut::identity(), &ex.g, cap) == Ok(Ordering::Less),
        || "id ≺ g fails".into(),
    )?;
    let in_hull =
        hull_of_cyclic_membership(&order, &ex.f, &ex.g, 10, cap).map_err(|e| e.to_string())?;
    ensure(in_hull == HullMembership::In { lower: 0, upper: 1 }, || {
        format!("g: {in_hull:?}")
    })?;
    let g2 = ex.g.compose(&ex.g);
    let res = hull_of_cyclic_membership(&order, &ex.f, &g2, 10, cap).map_err(|e| e.to_string())?;
    let HullMembership::NotIn { certificate } = res else {
        return Err(format!("g^2: {res:?}"));
    };
    certificate.verify(&order, &ex.f, &g2)?;
    let orbit = orbit_bound_certificate(&ex.f, &ex.a, &ex.d).map_err(|e| e.to_string())?;
    orbit.verify()?;
    let sampled = (-50..=50)
        .filter(|&k| ex.f.pow(k).apply(&ex.a) < ex.e)
        .count();
    ensure(sampled == 101, || {
        format!("only {sampled} of 101 orbit samples below e")
    })?;
    let took = within(start, Duration::from_secs(1))?;
    Ok(format!("constraints exact, g ≺ f, id ≺ g, g in [f^0, f^1], g^2 outside (fixed point {}), {took:.2?}", certificate.orbit.fixed_point))
}

fn free_chain() -> Outcome {
    let start = Instant::now();
    let mut certs = 0;
    for n in 1..=4 {
        for i in 0..=n {
            for m0 in 1..=50 {
                for m1 in (1..=50).filter(|&m1| m1 != m0) {
                    let c =
                        chain_nonmembership_certificate(n, i, m0, m1).map_err(|e| e.to_string())?;
                    ensure(c.verify(), || {
                        format!("certificate ({n},{i},{m0},{m1}) does not verify")
                    })?;
                    certs += 1;
                }
            }
        }
    }
    let p = build_free_chain_pattern(4, 5).map_err(|e| e.to_string())?;
    let v = verify_pattern(&p);
    check_verdict(&p, &v, &VerifyOptions::default())?;
    let Verdict::Verified { witnesses, .. } = &v else {
        return Err(format!("(4,5) verdict is {}", v.name()));
    };
    let images: HashSet<String> = witnesses
        .iter()
        .filter_map(|w| w.element.as_free())
        .map(|w| abelianize(w).to_string())
        .collect();
    ensure(witnesses.len() == 3125 && images.len() == 3125, || {
        format!(
            "{} witnesses, {} distinct abelianizations",
            witnesses.len(),
            images.len()
        )
    })?;
    let took = within(start, Duration::from_secs(10))?;
    Ok(format!(
        "{certs} certificates; 3125 witnesses, distinct under abelianization, {took:.2?}"
    ))
}

fn presburger_copy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pairs: Vec<_> = (0..10_000)
        .map(|_| (random_element(&mut rng, BIG), random_element(&mut rng, BIG)))
        .collect();
    let checked =
        presburger::check(pairs.iter().map(|(a, b)| (a, b))).map_err(|v| format!("{v:?}"))?;
    Ok(format!("{checked} pairs, 0 violations"))
}

fn soundness_regression() -> Outcome {
    let iv = |a: i64, b: i64| KbInterval::new(KbElement::new(0, a), KbElement::new(0, b)).unwrap();
    let overlapping = Row::new(
        "interval",
        vec![
            vec![KbElement::new(0, 0).into()],
            vec![KbElement::new(0, 3).into()],
        ],
        vec![DefSet::interval(iv(0, 5)), DefSet::interval(iv(3, 8))],
        2,
    )
    .map_err(|e| e.to_string())?;
    let overlap = PatternInstance::new(vec![overlapping], Vec::new()).map_err(|e| e.to_string())?;
    let base = build_kb_depth2(4, 4).map_err(|e| e.to_string())?;
    let duplicated = PatternInstance::new(
        vec![base.rows()[0].clone(), base.rows()[0].clone()],
        Vec::new(),
    )
    .map_err(|e| e.to_string())?;
    for (name, p) in [
        ("overlapping intervals", overlap),
        ("duplicated row", duplicated),
    ] {
        let v = verify_pattern(&p);
        ensure(v.is_refuted(), || format!("{name}: verdict {}", v.name()))?;
        check_verdict(&p, &v, &VerifyOptions::default()).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("overlapping intervals and duplicated row both refuted".into())
}

fn index_pairs() -> Outcome {
    let axes = index_pair_check(&KbSubgroup::x_axis(), &KbSubgroup::y_axis());
    ensure(
        axes.first == CosetIndex::Infinite && axes.second == CosetIndex::Infinite,
        || format!("(<x>,<y>) gave ({}, {})", axes.first, axes.second),
    )?;
    for reps in [&axes.first_representatives, &axes.second_representatives] {
        ensure(reps.len() >= 2, || "no evidence".into())?;
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[..i] {
                ensure(!axes.intersection.same_right_coset(a, b), || {
                    format!("{a} and {b} share a coset")
                })?;
            }
        }
    }
    let full = index_pair_check(&KbSubgroup::Full, &KbSubgroup::centralizer_of_y());
    ensure(
        full.first == CosetIndex::Finite(2) && full.second == CosetIndex::Finite(1),
        || format!("(G, C(y)) gave ({}, {})", full.first, full.second),
    )?;
    Ok(format!(
        "(<x>,<y>) -> (∞, ∞) with {}+{} distinct-coset representatives; (G, C(y)) -> (2, 1)",
        axes.first_representatives.len(),
        axes.second_representatives.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Klein bottle group axioms and affine oracle", group_axioms),
        ("defining relation and identities", identities),
        ("left-invariance of the lex order", left_invariance),
        ("depth-2 Klein bottle pattern", depth2_pattern),
        ("interval coset cover fails for the center", cover_fails),
        (
            "convex hull of a cyclic subgroup in Aut(Q)",
            plaut_counterexample,
        ),
        ("free-group chain pattern", free_chain),
        ("Presburger copy of the Klein bottle group", presburger_copy),
        ("verifier soundness regression", soundness_regression),
        ("index pairs", index_pairs),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
