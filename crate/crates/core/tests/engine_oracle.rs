use fgl_core::engine::{
    coefficient_table, extend, initial_fgl, p_series, reassemble, verify_degree_bound, vs_regrade,
    FglParams, FglTower, TruncatedFgl,
};
use fgl_core::oracle::{compare, compose, default_degree, oracle_fgl, revert_series};
use fgl_core::ring::{vars, Rationals, SparsePoly, TruncationPolicy};
use fgl_core::witt::{witt_family, witt_mod_p};
use fgl_core::FglError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn params(p: u64, s: u32) -> FglParams {
    FglParams::new(p, s).unwrap()
}

fn text(f: &TruncatedFgl) -> String {
    f.poly().to_text()
}

/// Values computed by a separate implementation of the ladder and checked
/// there against the logarithm construction.
#[test]
fn frozen_levels() {
    let t = FglTower::compute(params(2, 2), 3).unwrap();
    assert_eq!(text(t.level(1).unwrap()), "x + y");
    assert_eq!(text(t.level(2).unwrap()), "x + y + x^2*y^2");
    assert_eq!(
        text(t.level(3).unwrap()),
        "x + y + x^2*y^2 + x^6*y^4 + x^4*y^6 + x^12*y^4"
    );
    let t = FglTower::compute(params(2, 3), 2).unwrap();
    assert_eq!(text(t.top()), "x + y + x^4*y^4");
    let t = FglTower::compute(params(3, 2), 2).unwrap();
    assert_eq!(text(t.top()), "x + y + 2*x^6*y^3 + 2*x^3*y^6");
}

#[test]
fn second_level_is_x_plus_y_plus_w1_to_the_q() {
    for p in [2, 3, 5] {
        let w1 = witt_mod_p(&witt_family(p, 1).unwrap())[1].clone();
        for s in [2, 3] {
            let pr = params(p, s);
            let t = FglTower::compute(pr, 2).unwrap();
            let x = SparsePoly::var(vars(&["x", "y"]), pr.field(), "x").unwrap();
            let y = SparsePoly::var(vars(&["x", "y"]), pr.field(), "y").unwrap();
            let expected = x
                .add(&y)
                .unwrap()
                .add(&w1.pow(pr.q(), &TruncationPolicy::none()))
                .unwrap();
            assert_eq!(t.top().poly(), &expected, "p = {p}, s = {s}");
        }
    }
}

fn grid() -> Vec<(u64, u32, u32)> {
    vec![
        (2, 2, 5),
        (2, 3, 3),
        (3, 2, 3),
        (3, 3, 2),
        (5, 2, 2),
        (7, 2, 2),
    ]
}

#[test]
fn tower_laws_across_grid() {
    for (p, s, n) in grid() {
        let t = FglTower::compute(params(p, s), n).unwrap();
        for (idx, f) in t.levels().iter().enumerate() {
            let tag = format!("p = {p}, s = {s}, level {}", idx + 1);
            assert!(f.check_unit_laws(), "{tag}");
            assert!(f.check_commutativity(), "{tag}");
            assert!(f.check_grading(), "{tag}");
            assert!(verify_degree_bound(f).passed(), "{tag}");
            if idx > 0 {
                assert_eq!(
                    &f.restrict(idx as u32).unwrap(),
                    &t.levels()[idx - 1],
                    "{tag}"
                );
            }
            let table = coefficient_table(f);
            assert_eq!(table.len() as u64, f.y_cap());
            assert_eq!(
                &reassemble(&table, f.params().field()).unwrap(),
                f.poly(),
                "{tag}"
            );
        }
    }
}

#[test]
fn free_extend_agrees_with_tower() {
    let pr = params(3, 2);
    let mut levels = vec![initial_fgl(pr).unwrap()];
    for _ in 0..2 {
        let next = extend(&levels).unwrap();
        levels.push(next);
    }
    assert_eq!(levels, FglTower::compute(pr, 3).unwrap().levels());
}

#[test]
fn engine_matches_oracle() {
    let cases = [
        (2, 2, 2, 5),
        (2, 2, 3, 17),
        (2, 2, 4, 33),
        (2, 3, 2, 17),
        (3, 2, 2, 10),
        (3, 2, 2, 19),
        (3, 2, 3, 28),
        (5, 2, 2, 26),
    ];
    for (p, s, n, d) in cases {
        let pr = params(p, s);
        let t = FglTower::compute(pr, n).unwrap();
        let o = oracle_fgl(pr, d).unwrap();
        for f in t.levels() {
            let r = compare(f, &o).unwrap();
            assert!(
                r.agrees(),
                "({p},{s},{},{d}): {:?}",
                f.level(),
                r.mismatches
            );
            assert!(r.region_size > 0);
        }
    }
}

#[test]
fn default_degree_comparison_is_nonvacuous() {
    for (p, s, n) in [(2, 2, 3), (2, 3, 2), (3, 2, 2)] {
        let pr = params(p, s);
        let d = default_degree(pr, n);
        let t = FglTower::compute(pr, n).unwrap();
        let o = oracle_fgl(pr, d).unwrap();
        let r = compare(t.top(), &o).unwrap();
        assert!(r.agrees());
        // the first nonlinear term has total degree p^s + 1
        assert!(o.poly_mod_p.len() > 2);
    }
}

#[test]
fn oracle_is_p_integral() {
    for (p, s, d) in [(2, 2, 17), (3, 2, 19), (2, 3, 17), (5, 2, 26)] {
        let o = oracle_fgl(params(p, s), d).unwrap();
        let pb = BigInt::from(p);
        for (_, c) in o.poly_rational.terms() {
            assert!(
                !c.denom().is_multiple_of(&pb),
                "denominator {} at p = {p}",
                c.denom()
            );
        }
    }
}

#[test]
fn oracle_laws() {
    for (p, s) in [(2, 2), (3, 2), (2, 3)] {
        let o = oracle_fgl(params(p, s), 10).unwrap();
        assert!(o.check_associativity().unwrap(), "({p},{s})");
        assert!(o.check_commutativity());
        assert!(o.check_unit_laws());
        assert!(o.check_p_series().unwrap());
    }
}

#[test]
fn p_series_validity() {
    let t = FglTower::compute(params(2, 2), 3).unwrap();
    let ps = p_series(t.top(), 1).unwrap();
    assert_eq!(
        (ps.series.to_text().as_str(), ps.validity_bound),
        ("x^4", 8)
    );
    assert_eq!(p_series(t.top(), 0).unwrap().series.to_text(), "x");

    let t = FglTower::compute(params(3, 2), 3).unwrap();
    assert!(p_series(t.level(2).unwrap(), 1).unwrap().is_vacuous_for(9));
    let ps = p_series(t.top(), 1).unwrap();
    assert!(!ps.is_vacuous_for(9));
    assert_eq!(
        (ps.series.to_text().as_str(), ps.validity_bound),
        ("x^9", 27)
    );
}

#[test]
fn regrade_values() {
    let t = FglTower::compute(params(2, 2), 3).unwrap();
    let g = vs_regrade(t.top()).unwrap();
    assert_eq!(g[&(1, 0)], 0);
    assert_eq!(g[&(2, 2)], 1);
    assert_eq!(g[&(12, 4)], 5);
    let t = FglTower::compute(params(2, 3), 2).unwrap();
    assert_eq!(vs_regrade(t.top()).unwrap()[&(4, 4)], 1);
}

#[test]
fn ungraded_input_is_reported() {
    let pr = params(2, 2);
    let bad = SparsePoly::from_terms(
        vars(&["x", "y"]),
        pr.field(),
        [(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1)],
    )
    .unwrap();
    let f = TruncatedFgl::from_poly(pr, 2, bad).unwrap();
    assert!(!f.check_grading());
    assert!(matches!(
        vs_regrade(&f),
        Err(FglError::Grading {
            i: 1,
            j: 1,
            modulus: 3
        })
    ));
}

#[test]
fn tower_guard_refuses_large_caps() {
    let limits = fgl_core::engine::EngineLimits {
        max_y_cap: 16,
        ..Default::default()
    };
    let mut t = FglTower::with_limits(params(2, 2), limits).unwrap();
    assert!(t.extend_to(4).is_ok());
    assert!(matches!(t.extend(), Err(FglError::Resource { .. })));
    assert_eq!(t.levels().len(), 4);
}

fn unit_series() -> impl Strategy<Value = SparsePoly<Rationals>> {
    prop::collection::vec((2u32..12, -5i64..6, 1i64..4), 0..5).prop_map(|terms| {
        let mut all = vec![(vec![1u32], BigRational::from_integer(1.into()))];
        all.extend(
            terms
                .into_iter()
                .map(|(e, n, d)| (vec![e], BigRational::new(n.into(), d.into()))),
        );
        SparsePoly::from_terms(vars(&["x"]), Rationals, all).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversion_is_two_sided(f in unit_series(), d in 2u64..12) {
        let g = revert_series(&f, d).unwrap();
        let x = SparsePoly::var(vars(&["x"]), Rationals, "x").unwrap();
        prop_assert_eq!(compose(&f, &g, d).unwrap(), x.clone());
        prop_assert_eq!(compose(&g, &f, d).unwrap(), x);
    }
}
