use chiralform::geometry::*;
use chiralform::suites::*;
use std::time::Instant;

fn main() {
    for geom in [
        Geometry::cylinder(Chirality::Plus),
        Geometry::cylinder(Chirality::Minus),
        Geometry::half_space(Chirality::Plus),
        Geometry::half_space(Chirality::Minus),
    ] {
        for name in SUITE_NAMES {
            if name == "holonomy" && geom.kind != GeometryKind::Cylinder { continue; }
            let mut s = RunSettings::new(geom.clone());
            s.n_samples = if name == "regions_oracle" { 200 } else { 100 };
            s.ccr_pairs = 4;
            let t = Instant::now();
            let rep = run_suite::<f64>(name, &s).unwrap();
            println!("{:?}/{:?} {name}: pass {} max {:.2e} ({:.1?})", geom.kind, geom.chirality, rep.pass, rep.max_residual, t.elapsed());
            if !rep.pass {
                for c in rep.checks.iter().filter(|c| !c.pass).take(2) {
                    println!("   FAIL {} sample {} residual {:.2e}", c.identity, c.sample, c.residual);
                }
            }
        }
    }
}
