use std::collections::{BTreeMap, BTreeSet, HashSet};

use curvecount::words::{apply_automorphism, format_letters, invert, mcg_generators};
use curvecount::*;
use num_integer::Integer;
use proptest::prelude::*;

fn torus() -> SurfaceModel {
    build_model_by_id("torus-1-1").unwrap()
}

fn genus2() -> SurfaceModel {
    build_model_by_id("genus-2").unwrap()
}

fn letters(rank: i8, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=rank, any::<bool>()), 1..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, neg)| Letter::new(if neg { -g } else { g })).collect())
}

fn primitive() -> impl Strategy<Value = (i64, i64)> {
    (-60i64..=60, -60i64..=60).prop_filter("primitive", |(p, q)| p.gcd(q) == 1)
}

fn valid_dt(max: i64) -> impl Strategy<Value = DTCoord> {
    ([0..=max, 0..=max, 0..=max], [-max..=max, -max..=max, -max..=max])
        .prop_filter_map("valid Dehn-Thurston data", |(m, t)| validate_dt(m, t).ok())
}

/// SL(2,Z) matrices as products of elementary moves.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0..4u8, 1i64..=3), 0..6).prop_map(|moves| {
        let mut m = [[1i64, 0], [0, 1]];
        for (kind, k) in moves {
            let e = match kind {
                0 => [[1, k], [0, 1]],
                1 => [[1, -k], [0, 1]],
                2 => [[1, 0], [k, 1]],
                _ => [[0, -1], [1, 0]],
            };
            m = [
                [m[0][0] * e[0][0] + m[0][1] * e[1][0], m[0][0] * e[0][1] + m[0][1] * e[1][1]],
                [m[1][0] * e[0][0] + m[1][1] * e[1][0], m[1][0] * e[0][1] + m[1][1] * e[1][1]],
            ];
        }
        m
    })
}

#[test]
fn models_are_deterministic_with_lattice_dimension_exponents() {
    for (id, n) in [("torus-1-1", 2), ("genus-2", 6)] {
        let a = build_model_by_id(id).unwrap();
        assert_eq!(a, build_model_by_id(id).unwrap());
        assert_eq!(growth_exponent(&a), n);
        assert_eq!(a.lattice_dimension(), n as usize);
    }
}

#[test]
fn genus2_balls_are_valid_distinct_and_monotone() {
    let g = genus2();
    let mut prev = 0;
    for l in 1..=8 {
        let ball = enumerate_ball(&g, &NormSpec::DtL1, l as f64).unwrap();
        let pts: Vec<Coord> = ball.iter().collect();
        let set: HashSet<Coord> = pts.iter().copied().collect();
        assert_eq!(set.len(), pts.len());
        for c in &pts {
            let Coord::Dt(d) = c else { panic!("torus point in a genus-2 ball") };
            assert!(validate_dt(d.m(), d.t()).is_ok());
            assert!(norm_eval(&NormSpec::DtL1, c).unwrap() <= l as f64);
        }
        assert!(pts.len() >= prev);
        prev = pts.len();
    }
}

#[test]
fn partition_identity_on_genus2() {
    let g = genus2();
    let schedule: Vec<f64> = (1..=10).map(f64::from).collect();
    for h in histogram_series(&g, &NormSpec::DtL1, &schedule, DEFAULT_POINT_CAP).unwrap() {
        let ball = enumerate_ball(&g, &NormSpec::DtL1, h.l).unwrap();
        assert_eq!(h.counts.values().sum::<u64>(), ball.count());
        assert_eq!(ball.count() as usize, ball.iter().count());
    }
}

#[test]
fn scc_dichotomy_at_small_radius() {
    let g = genus2();
    let nonsep = TypeKey::from_graph(&[(1, 2)], &[(0, 0, 1)]);
    let sep = TypeKey::from_graph(&[(1, 1), (1, 1)], &[(0, 1, 1)]);
    let h = count_by_type(&g, &NormSpec::DtL1, 4.0).unwrap();
    let singles: BTreeSet<TypeKey> = h
        .counts
        .keys()
        .filter(|k| matches!(k, TypeKey::Graph { edges, .. } if edges.len() == 1 && edges[0].2 == 1))
        .cloned()
        .collect();
    assert_eq!(singles, BTreeSet::from([nonsep, sep]));
}

#[test]
fn raw_counts_are_monotone() {
    let m = torus();
    let schedule: Vec<f64> = (1..=40).map(|k| 2.5 * k as f64).collect();
    for norm in [NormSpec::TorusDiamond, NormSpec::TorusSquare] {
        let hists = histogram_series(&m, &norm, &schedule, DEFAULT_POINT_CAP).unwrap();
        assert!(series_of(&hists, |h| h.total() as f64).unwrap().is_nondecreasing());
        let mut per_key: BTreeMap<TypeKey, u64> = BTreeMap::new();
        for h in &hists {
            for (k, v) in &h.counts {
                let prev = per_key.insert(k.clone(), *v).unwrap_or(0);
                assert!(*v >= prev);
            }
        }
    }
}

#[test]
fn symmetric_structure_has_equal_basic_lengths() {
    let m = torus();
    let rep = torus_structure(&m, 3.0, 3.0, 3.0).unwrap();
    let ls: Vec<f64> = [(1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(p, q)| torus_simple_length(&rep, canonicalize_torus(p, q).unwrap()).unwrap())
        .collect();
    assert!((ls[0] - ls[1]).abs() < 1e-9 && (ls[0] - ls[2]).abs() < 1e-9);
}

#[test]
fn hyperbolic_length_is_comparable_to_diamond() {
    let m = torus();
    let rep = torus_structure(&m, 3.0, 4.0, 6.0 + 11f64.sqrt()).unwrap();
    let c1 = hyperbolic_comparability(&rep).unwrap();
    let mut c2: f64 = 0.0;
    for p in 0..=50i64 {
        for q in -50i64..=50 {
            if p + q.abs() <= 50 && p.gcd(&q) == 1 && !(p == 0 && q < 0) {
                let r = torus_simple_length(&rep, canonicalize_torus(p, q).unwrap()).unwrap() / (p + q.abs()) as f64;
                assert!(r >= c1);
                c2 = c2.max(r);
            }
        }
    }
    assert!(c1 > 0.0 && c1 <= c2 && c2.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_constant_on_conjugacy_classes(w in letters(4, 14), g in letters(4, 6)) {
        let m = genus2();
        let conj: Vec<Letter> = g.iter().copied().chain(w.iter().copied()).chain(invert(&g)).collect();
        match (canonical_cyclic_form(&m, &w), canonical_cyclic_form(&m, &conj)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::TrivialClass), Err(Error::TrivialClass)) => {}
            (a, b) => prop_assert!(false, "{} vs {}: {:?} / {:?}", format_letters(&w), format_letters(&conj), a, b),
        }
    }

    #[test]
    fn torus_canonical_form_is_constant_on_conjugacy_classes(w in letters(2, 16), g in letters(2, 6)) {
        let m = torus();
        let conj: Vec<Letter> = g.iter().copied().chain(w.iter().copied()).chain(invert(&g)).collect();
        prop_assert_eq!(canonical_cyclic_form(&m, &w).ok(), canonical_cyclic_form(&m, &conj).ok());
    }

    #[test]
    fn automorphisms_act_on_classes(w in letters(4, 8), i in 0usize..10, j in 0usize..10) {
        let m = genus2();
        let gens = mcg_generators(&m);
        if let Ok(c) = canonical_cyclic_form(&m, &w) {
            let (phi, psi) = (&gens[i], &gens[j]);
            let direct = apply_automorphism(&m, &phi.compose(psi), &c).unwrap();
            let stepwise = apply_automorphism(&m, phi, &apply_automorphism(&m, psi, &c).unwrap()).unwrap();
            prop_assert_eq!(direct, stepwise);
        }
    }

    #[test]
    fn torus_generators_fix_the_peripheral_class(i in 0usize..4) {
        let m = torus();
        let gens = mcg_generators(&m);
        prop_assert!(gens[i].preserves_class_in_free_group(m.peripheral.as_ref().unwrap()));
    }

    #[test]
    fn norms_are_one_homogeneous((p, q) in primitive(), k in 1u64..=20, c in valid_dt(6)) {
        let t = canonicalize_torus(p, q).unwrap();
        for norm in [NormSpec::TorusDiamond, NormSpec::TorusSquare] {
            let one = norm_eval(&norm, &Coord::Torus(t)).unwrap();
            prop_assert_eq!(norm_eval(&norm, &Coord::Torus(t.scale(k))).unwrap(), k as f64 * one);
        }
        let k = k as i64;
        let scaled = validate_dt(c.m().map(|x| k * x), c.t().map(|x| k * x)).unwrap();
        let weighted = NormSpec::DtWeighted(DtWeights::integers([1, 2, 1], [1, 1, 2]));
        for norm in [NormSpec::DtL1, weighted] {
            let one = norm_eval(&norm, &Coord::Dt(c)).unwrap();
            prop_assert!((norm_eval(&norm, &Coord::Dt(scaled)).unwrap() - k as f64 * one).abs() < 1e-9);
        }
    }

    #[test]
    fn torus_intersection_is_symmetric_and_bilinear((p, q) in primitive(), (r, s) in primitive(), j in 1u64..=9, k in 1u64..=9) {
        let (a, b) = (canonicalize_torus(p, q).unwrap(), canonicalize_torus(r, s).unwrap());
        prop_assert_eq!(torus_intersection(a, b), torus_intersection(b, a));
        prop_assert_eq!(torus_intersection(a.scale(j), b.scale(k)), j * k * torus_intersection(a, b));
        prop_assert_eq!(torus_intersection(a, a), 0);
        let diamond = norm_eval(&NormSpec::TorusDiamond, &Coord::Torus(a)).unwrap();
        let (ea, eb) = (canonicalize_torus(1, 0).unwrap(), canonicalize_torus(0, 1).unwrap());
        prop_assert_eq!(diamond, (torus_intersection(a, ea) + torus_intersection(a, eb)) as f64);
    }

    #[test]
    fn torus_type_is_unimodular_invariant((p, q) in primitive(), g in unimodular(), k in 1u64..=5) {
        let m = torus();
        let a = canonicalize_torus(p, q).unwrap().scale(k);
        let (p2, q2) = (g[0][0] * a.p() + g[0][1] * a.q(), g[1][0] * a.p() + g[1][1] * a.q());
        let b = canonicalize_torus(p2, q2).unwrap();
        prop_assert_eq!(type_key(&m, &Coord::Torus(a)).unwrap(), type_key(&m, &Coord::Torus(b)).unwrap());
        prop_assert_eq!(type_key(&m, &Coord::Torus(b)).unwrap(), TypeKey::Torus { weight: k });
    }

    #[test]
    fn traced_components_reassemble(c in valid_dt(7)) {
        let g = genus2();
        let dec = typing::trace_components_dt(&g, &c).unwrap();
        prop_assert_eq!(dec.reassemble(), Some(Coord::Dt(c)));
        for (comp, _) in &dec.components {
            let Component::Dt(x) = comp else { panic!("torus component on genus 2") };
            prop_assert!(validate_dt(x.m(), x.t()).is_ok());
        }
    }

    #[test]
    fn diamond_count_matches_closed_form(l in 1u64..=100) {
        let h = count_by_type(&torus(), &NormSpec::TorusDiamond, l as f64).unwrap();
        let li = l as i64;
        let brute = (-li..=li).flat_map(|p| (-li..=li).map(move |q| (p, q)))
            .filter(|&(p, q)| (p, q) != (0, 0) && p.abs() + q.abs() <= li)
            .count() as u64 / 2;
        prop_assert_eq!(h.total(), l * l + l);
        prop_assert_eq!(h.total(), brute);
    }

    #[test]
    fn multicurve_length_scales(w in letters(2, 10), k in 1u64..=6) {
        let m = torus();
        let rep = torus_structure(&m, 3.0, 4.0, 6.0 + 11f64.sqrt()).unwrap();
        if let Ok(c) = canonical_cyclic_form(&m, &w) {
            if let Ok(one) = word_length(&rep, &c) {
                prop_assert!(one > 0.0);
                let inv = canonical_cyclic_form(&m, &invert(c.letters())).unwrap();
                prop_assert!((word_length(&rep, &inv).unwrap() - one).abs() < 1e-9 * one.max(1.0));
                let many = multicurve_length(&rep, &[(c, k)]).unwrap();
                prop_assert!((many - k as f64 * one).abs() < 1e-9 * many.max(1.0));
            }
        }
    }
}
