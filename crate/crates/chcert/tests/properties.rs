//! Property tests for the algebraic invariants of the kernel.

use proptest::prelude::*;

use chcert::cones::{check_cone_conditions, check_cone_conditions_rescaled, coeffs_abc};
use chcert::matrix::BlockBounds;
use chcert::{DerivativeBounds, Interval};

fn small_f64() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-100.0..100.0f64),
        (-1.0..1.0f64),
        (-1e-6..1e-6f64),
        Just(0.0),
    ]
}

fn interval() -> impl Strategy<Value = Interval> {
    (small_f64(), small_f64()).prop_map(|(a, b)| Interval::new(a.min(b), a.max(b)).unwrap())
}

fn widened(iv: Interval, dl: f64, dh: f64) -> Interval {
    Interval::new(iv.lo() - dl.abs(), iv.hi() + dh.abs()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Inclusion monotonicity: widening the operands can only widen the
    /// result.
    #[test]
    fn inclusion_monotonicity(
        a in interval(),
        b in interval(),
        da in 0.0..1.0f64,
        db in 0.0..1.0f64,
    ) {
        let aw = widened(a, da, db);
        let bw = widened(b, db, da);
        prop_assert!((aw + bw).encloses(&(a + b)));
        prop_assert!((aw - bw).encloses(&(a - b)));
        prop_assert!((aw * bw).encloses(&(a * b)));
        prop_assert!(aw.square().encloses(&a.square()));
        prop_assert!(aw.abs().encloses(&a.abs()));
        prop_assert!(aw.sin().encloses(&a.sin()));
        prop_assert!(aw.cos().encloses(&a.cos()));
        if !bw.contains(0.0) {
            prop_assert!(aw.try_div(bw).unwrap().encloses(&a.try_div(b).unwrap()));
        }
    }

    /// Widening any block never increases the guaranteed expansion `b`
    /// and never decreases the penalties `a` and `c`.
    #[test]
    fn abc_monotone_under_widening(
        entries in proptest::array::uniform9(interval()),
        pos in 0usize..9,
        grow in 0.0..2.0f64,
    ) {
        let blocks = BlockBounds::from_scalar_entries(entries);
        let mut wider_entries = entries;
        wider_entries[pos] = widened(entries[pos], grow, grow);
        let wider = BlockBounds::from_scalar_entries(wider_entries);

        let base = coeffs_abc(&blocks);
        let grown = coeffs_abc(&wider);
        prop_assert!(grown.a >= base.a);
        prop_assert!(grown.b <= base.b);
        prop_assert!(grown.c >= base.c);
    }

    /// The rescaled check at v = 1 agrees with the plain check on
    /// arbitrary bound sets, bit for bit.
    #[test]
    fn rescaled_v1_matches_plain(
        c in 0.0..5.0f64,
        eps_c in 0.0..1.0f64,
        mu_frac in 0.0..1.0f64,
        m in 0.0..5.0f64,
        a_sup in 0.0..10.0f64,
        alpha_frac in 0.0..1.0f64,
        eps_u in 0.0..2.0f64,
        eps_s in 0.0..2.0f64,
        beta in 0.0..2.0f64,
        rate in 1.0001..50.0f64,
    ) {
        let b = DerivativeBounds::new(
            c, eps_c, mu_frac * m, m, a_sup, alpha_frac * a_sup, eps_u, eps_s, beta,
        ).unwrap();
        let plain = check_cone_conditions(&b, rate).unwrap();
        let scaled = check_cone_conditions_rescaled(&b, rate, 1.0).unwrap();
        prop_assert_eq!(plain.holds, scaled.holds);
        prop_assert_eq!(plain.lhs, scaled.lhs);
        prop_assert_eq!(plain.margin, scaled.margin);
    }

    /// The set of rates at which the check passes is an interval: if it
    /// holds at `m`, it holds at every smaller admissible rate whose
    /// second-inequality slack allows, i.e. scanning downward from a
    /// passing rate toward 1 can only flip once.
    #[test]
    fn pass_set_in_rate_is_an_interval(
        a_sup in 1.5..10.0f64,
        alpha_frac in 0.5..1.0f64,
        beta in 0.0..1.0f64,
        eps in 0.0..0.3f64,
    ) {
        let b = DerivativeBounds::new(
            1.0, 0.0, 0.0, 0.0, a_sup, alpha_frac * a_sup, eps, eps, beta,
        ).unwrap();
        let rates: Vec<f64> = (1..200).map(|k| 1.0 + k as f64 * 0.25).collect();
        let passes: Vec<bool> = rates
            .iter()
            .map(|&m| check_cone_conditions(&b, m).unwrap().holds)
            .collect();
        // No false-true-false-true patterns: the pass set is contiguous.
        let flips = passes.windows(2).filter(|w| w[0] != w[1]).count();
        prop_assert!(flips <= 2, "pass pattern not contiguous: {passes:?}");
    }
}
