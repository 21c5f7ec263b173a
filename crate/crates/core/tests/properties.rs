use proptest::prelude::*;
use qgauss::specfun::{gauss_2f1_restricted, inv_reg_inc_beta, power_series, reg_inc_beta, BetaParams};
use qgauss::{compose, make_map, QGaussian, QIndex};

fn heavy_q() -> impl Strategy<Value = f64> {
    1.02f64..2.95
}

fn any_q() -> impl Strategy<Value = f64> {
    prop_oneof![-20.0f64..0.99, heavy_q()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn beta_reflection(x in 0.0f64..=1.0, a in 0.05f64..20.0, b in 0.05f64..20.0) {
        let p = BetaParams::new(a, b).unwrap();
        let lhs = reg_inc_beta(x, p).unwrap() + reg_inc_beta(1.0 - x, p.swapped()).unwrap();
        prop_assert!((lhs - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn beta_monotone(x1 in 0.0f64..1.0, dx in 0.0f64..0.5, a in 0.05f64..20.0, b in 0.05f64..20.0) {
        let p = BetaParams::new(a, b).unwrap();
        let x2 = (x1 + dx).min(1.0);
        prop_assert!(reg_inc_beta(x1, p).unwrap() <= reg_inc_beta(x2, p).unwrap());
    }

    #[test]
    fn beta_inverse_residual(y in 0.0f64..1.0, q in heavy_q()) {
        let p = BetaParams::heavy_tail(q).unwrap();
        let x = inv_reg_inc_beta(y, p).unwrap();
        // a double x can only get within one ulp of the root
        let at = |t: f64| reg_inc_beta(t.clamp(0.0, 1.0), p).unwrap();
        let step = (at(x.next_up()) - at(x)).max(at(x) - at(x.next_down()));
        prop_assert!((at(x) - y).abs() <= step.max(1e-12));
    }

    #[test]
    fn pfaff_sides_agree(b in -3.0f64..3.0, z in -0.95f64..-0.01) {
        let (a, c) = (0.5, 1.5);
        let direct = power_series(a, b, c, z).unwrap();
        let transformed = gauss_2f1_restricted(a, b, c, z).unwrap();
        prop_assert!(((direct - transformed) / direct).abs() <= 1e-10);
    }

    #[test]
    fn cdf_quantile_inverse(q in any_q(), p in 0.0005f64..0.9995) {
        let d = QGaussian::standard(q).unwrap();
        let x = d.quantile(p).unwrap();
        prop_assert!((d.cdf(x) - p).abs() <= 1e-10);
    }

    #[test]
    fn map_is_odd_and_monotone(qs in any_q(), qt in any_q(), u in 0.01f64..0.98, du in 0.001f64..0.01) {
        let m = make_map(QIndex::new(qs).unwrap(), QIndex::new(qt).unwrap()).unwrap();
        let l = m.target().support_bound().min(10.0);
        let (z1, z2) = (u * l, (u + du) * l);
        let (y1, y2) = (m.eval(z1).unwrap(), m.eval(z2).unwrap());
        prop_assert_eq!(m.eval(-z1).unwrap(), -y1);
        prop_assert!(y2 > y1);
    }

    #[test]
    fn composition_matches_direct(a in heavy_q(), b in any_q(), c in heavy_q(), z in 0.05f64..4.0) {
        let (ia, ib, ic) = (QIndex::new(a).unwrap(), QIndex::new(b).unwrap(), QIndex::new(c).unwrap());
        let chained = compose(&make_map(ib, ic).unwrap(), &make_map(ia, ib).unwrap()).unwrap();
        let direct = make_map(ia, ic).unwrap();
        let (x, y) = (chained.eval(z).unwrap(), direct.eval(z).unwrap());
        prop_assert!(((x - y) / y).abs() <= 1e-8, "{} vs {}", x, y);
    }
}
