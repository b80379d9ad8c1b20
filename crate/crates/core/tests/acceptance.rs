//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line. Tolerances are pinned here: exact-backend identities must
//! hold with residual exactly zero, float-backend identities within 1e-9.

use chiralform::ccr::{self, CcrElement};
use chiralform::forms::Form;
use chiralform::geometry::{Chirality, Geometry, GeometryKind};
use chiralform::reduction::{self, UnitBump};
use chiralform::scalar::{Exact, Q, q_i64, q_ratio};
use chiralform::suites::{RunSettings, SuiteReport, run_suite};
use std::time::Instant;

const FLOAT_TOL: f64 = 1e-9;

fn all_geometries() -> Vec<Geometry> {
    vec![
        Geometry::cylinder(Chirality::Plus),
        Geometry::cylinder(Chirality::Minus),
        Geometry::half_space(Chirality::Plus),
        Geometry::half_space(Chirality::Minus),
    ]
}

fn settings(geom: &Geometry, n: usize) -> RunSettings {
    let mut s = RunSettings::new(geom.clone());
    s.n_samples = n;
    s.tol = FLOAT_TOL;
    s.seed = 2026;
    s.ccr_pairs = 4;
    s
}

fn geometry_label(geom: &Geometry) -> String {
    format!("{:?}/{:?}", geom.kind, geom.chirality)
}

fn assert_all_zero(rep: &SuiteReport, what: &str) {
    assert!(
        rep.pass,
        "{what}: failing checks: {:?}",
        rep.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} (sample {}, residual {:.3e})", c.identity, c.sample, c.residual))
            .take(3)
            .collect::<Vec<_>>()
    );
    assert_eq!(rep.max_residual, 0.0, "{what}: exact run must have zero residual");
}

fn verdict(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

#[test]
fn criterion_01_greens_homotopy_identity() {
    let mut ok = true;
    for geom in all_geometries() {
        let start = Instant::now();
        let rep = run_suite::<Exact>("greens_identities", &settings(&geom, 100)).unwrap();
        let elapsed = start.elapsed();
        assert_all_zero(&rep, &format!("greens identities on {}", geometry_label(&geom)));
        assert!(
            elapsed.as_secs() < 60,
            "runtime target exceeded on {}: {elapsed:?}",
            geometry_label(&geom)
        );
        ok &= rep.pass;
        let frep = run_suite::<f64>("greens_identities", &settings(&geom, 100)).unwrap();
        assert!(frep.pass, "float greens identities on {}", geometry_label(&geom));
        assert!(frep.max_residual <= FLOAT_TOL);
        ok &= frep.pass;
    }
    println!("criterion 01 (Green's homotopy identity, exact 0 / float 1e-9, <60s): {}", verdict(ok));
}

#[test]
fn criterion_02_support_property() {
    let mut ok = true;
    for geom in all_geometries() {
        let rep = run_suite::<Exact>("greens_identities", &settings(&geom, 100)).unwrap();
        let support_checks: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| c.identity.contains("supp"))
            .collect();
        assert!(
            support_checks.len() >= 100,
            "need at least 100 support checks, got {}",
            support_checks.len()
        );
        assert!(support_checks.iter().all(|c| c.pass), "support containment violated");
        ok &= support_checks.iter().all(|c| c.pass);
    }
    println!("criterion 02 (support containment in the flow future/past, 100%): {}", verdict(ok));
}

#[test]
fn criterion_03_difference_identity() {
    let mut ok = true;
    for geom in all_geometries() {
        let rep = run_suite::<Exact>("difference_identity", &settings(&geom, 100)).unwrap();
        assert_all_zero(&rep, &format!("difference identity on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    println!("criterion 03 (kernel difference equals the orbit-integral operator, exact): {}", verdict(ok));
}

#[test]
fn criterion_04_boundary_condition_restriction() {
    let mut ok = true;
    for geom in all_geometries() {
        let rep = run_suite::<Exact>("boundary_restriction", &settings(&geom, 100)).unwrap();
        assert_all_zero(&rep, &format!("boundary restriction on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    println!("criterion 04 (kernels restrict to the boundary condition, commuting with pullback): {}", verdict(ok));
}

#[test]
fn criterion_05_poisson_structure() {
    let mut ok = true;
    for geom in all_geometries() {
        let rep = run_suite::<Exact>("poisson_antisymmetry", &settings(&geom, 100)).unwrap();
        assert_all_zero(&rep, &format!("poisson structure on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    // float tolerance leg on both geometry kinds
    for geom in [Geometry::cylinder(Chirality::Plus), Geometry::half_space(Chirality::Minus)] {
        let frep = run_suite::<f64>("poisson_antisymmetry", &settings(&geom, 100)).unwrap();
        assert!(frep.pass && frep.max_residual <= FLOAT_TOL, "float poisson residual {}", frep.max_residual);
        ok &= frep.pass;
    }
    println!("criterion 05 (antisymmetry and two-route agreement, exact 0 / float 1e-9): {}", verdict(ok));
}

#[test]
fn criterion_06_einstein_causality() {
    let mut ok = true;
    for geom in all_geometries() {
        // the suite runs one region pair per two samples; 100 gives 50 pairs
        let rep = run_suite::<Exact>("causality", &settings(&geom, 100)).unwrap();
        assert!(rep.n_samples >= 50, "need at least 50 region pairs");
        assert_all_zero(&rep, &format!("causality on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    println!("criterion 06 (classical and algebra-level causality on 50 disjoint pairs): {}", verdict(ok));
}

#[test]
fn criterion_07_sdr_time_slice_identities() {
    let mut ok = true;
    for geom in all_geometries() {
        let rep = run_suite::<Exact>("reduction_sdr", &settings(&geom, 100)).unwrap();
        assert_all_zero(&rep, &format!("reduction retract on {}", geometry_label(&geom)));
        ok &= rep.pass;
        let rep = run_suite::<Exact>("boundary_sdr", &settings(&geom, 100)).unwrap();
        assert_all_zero(&rep, &format!("collar retract on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    println!("criterion 07 (deformation-retract identities for reduction and collar, exact): {}", verdict(ok));
}

#[test]
fn criterion_08_ccr_algebra() {
    let mut ok = true;
    for geom in [Geometry::cylinder(Chirality::Plus), Geometry::half_space(Chirality::Minus)] {
        let s = settings(&geom, 100);
        let rep = run_suite::<Exact>("ccr_relations", &s).unwrap();
        // the window is 3 * ccr_pairs = 12 generators
        assert_all_zero(&rep, &format!("ccr relations on {}", geometry_label(&geom)));
        ok &= rep.pass;
        let rep = run_suite::<Exact>("ccr_transport", &s).unwrap();
        assert_all_zero(&rep, &format!("ccr transport on {}", geometry_label(&geom)));
        ok &= rep.pass;
    }
    println!("criterion 08 (12-generator CCR window: relations, confluence, d^2=0, transport): {}", verdict(ok));
}

#[test]
fn criterion_09_holonomy_example() {
    let geom = Geometry::cylinder(Chirality::Plus);
    let rep = run_suite::<Exact>("holonomy", &settings(&geom, 4)).unwrap();
    assert_all_zero(&rep, "holonomy example");
    // the four reference holonomies appear with their exact pairings
    for expect in ["alpha = 1 (pairing -1", "alpha = 0 (pairing 0", "alpha = -2 (pairing 2", "alpha = 7/2 (pairing -3.5"] {
        assert!(
            rep.checks.iter().any(|c| c.identity.contains(expect) && c.pass),
            "missing holonomy value: {expect}"
        );
    }
    println!("criterion 09 (holonomy pairing -alpha, zero mode 1, zig-zag closes): {}", verdict(rep.pass));
}

#[test]
fn criterion_10_region_predicates_vs_oracle() {
    let mut ok = true;
    for geom in [
        Geometry::cylinder(Chirality::Plus),
        Geometry::half_space(Chirality::Plus),
    ] {
        let rep = run_suite::<Exact>("regions_oracle", &settings(&geom, 200)).unwrap();
        assert_eq!(rep.n_samples, 200);
        assert!(
            rep.checks.iter().all(|c| c.pass),
            "oracle disagreement on {}: {:?}",
            geometry_label(&geom),
            rep.checks.iter().find(|c| !c.pass).map(|c| &c.identity)
        );
        ok &= rep.pass;
    }
    println!("criterion 10 (region predicates agree with the orbit oracle on 200 instances): {}", verdict(ok));
}

#[test]
fn criterion_11_unit_bump_half_identity() {
    // ten distinct bumps, each with the exact collapse value one half
    let mut ok = true;
    for i in 0..10i64 {
        let a = q_ratio(1, 16) + q_ratio(i, 24);
        let b = &a + q_ratio(1, 5) + q_ratio(i, 40);
        let bump = UnitBump::<Exact>::new(&a, &b.clone().min(q_ratio(15, 16)));
        let tail = bump.profile.cumulative_to_right(Some(&q_i64(1))).unwrap();
        let prod = bump.profile.mul(&tail);
        let val = prod.integral(Some(&Q::from_integer(0.into())), Some(&q_i64(1))).unwrap();
        let expect = Exact::from_q(&q_ratio(1, 2));
        assert_eq!(val, expect, "bump {i} on [{a}, {b}]");
        ok &= val == expect;
    }
    println!("criterion 11 (unit-bump tail collapse equals one half, 10 bumps, exact): {}", verdict(ok));
}

#[test]
fn criterion_12_deterministic_reports() {
    let geom = Geometry::cylinder(Chirality::Plus);
    let mut ok = true;
    for suite in ["difference_identity", "poisson_antisymmetry", "holonomy"] {
        let a = run_suite::<Exact>(suite, &settings(&geom, 20)).unwrap();
        let b = run_suite::<Exact>(suite, &settings(&geom, 20)).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb, "reports differ across identical runs of {suite}");
        ok &= ja == jb;
    }
    println!("criterion 12 (byte-identical exact reports for a fixed seed): {}", verdict(ok));
}

/// Off-criteria regression: the degree-coherent transport of a generator
/// window along the quotient map matches the direct algebra of pushforwards
/// on a worked pair (kept as a cross-module smoke check at the acceptance
/// level).
#[test]
fn transport_smoke_check() {
    let geom = Geometry::cylinder(Chirality::Minus);
    let mut sampler = chiralform::sampling::Sampler::for_suite(9, "acceptance_smoke");
    let (pairing, set) = sampler.standard_window::<Exact>(&geom, 2).unwrap();
    let tgt_gens: Vec<(String, Form<Exact>)> = set
        .gens
        .iter()
        .filter_map(|g| {
            let p = reduction::pi_star(&geom, &g.form).ok()?;
            if p.is_zero() { None } else { Some((format!("p_{}", g.label), p)) }
        })
        .collect();
    let sigma = chiralform::poisson::Pairing::new(
        chiralform::poisson::PairingKind::SigmaZero,
        geom.clone(),
    );
    let tgt = ccr::GeneratorSet::new(&sigma, tgt_gens, 0.0).unwrap();
    let morphism = ccr::CcrMorphism::new(
        |f| reduction::pi_star(&geom, f),
        &set,
        &pairing,
        &tgt,
        &sigma,
        0.0,
    )
    .unwrap();
    let x = CcrElement::generator(&set, 0);
    let y = CcrElement::generator(&set, set.len() - 1);
    let xy = ccr::product(&set, &x, &y).unwrap();
    let lhs = morphism.apply(&tgt, &xy).unwrap();
    let rhs = ccr::product(
        &tgt,
        &morphism.apply(&tgt, &x).unwrap(),
        &morphism.apply(&tgt, &y).unwrap(),
    )
    .unwrap();
    assert!(lhs.sub(&rhs).unwrap().is_zero());
}

/// The cylinder's annular truncation leaves the worked values untouched for
/// observables supported away from the inner circle: re-run the holonomy
/// reference at a different inner radius.
#[test]
fn inner_radius_invariance() {
    let geom = Geometry::new(GeometryKind::Cylinder, Chirality::Plus, q_ratio(1, 8)).unwrap();
    let (a, b) = reduction::default_holonomy_window();
    let rep = reduction::holonomy_demo::<Exact>(&geom, (&a, &b), &q_i64(-2), 0.0).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.pairing, "2");
}
