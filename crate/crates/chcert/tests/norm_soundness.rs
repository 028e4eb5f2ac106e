//! Sampling oracles for the operator-norm bounds.
//!
//! Any sampled Rayleigh quotient `|Pv| / |v|` of a member matrix `P` lies
//! between `|P|_m` and `|P|`, so it must lie between the certified lower
//! and upper bounds as well. The oracle touches only plain `f64` linear
//! algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chcert::{Interval, IntervalMatrix};

fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntervalMatrix {
    let mut m = IntervalMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let c = (r.gen::<f64>() - 0.5) * 6.0;
            let w = r.gen::<f64>() * 0.5;
            m.set(i, j, Interval::new(c - w, c + w).unwrap());
        }
    }
    m
}

fn sample_member(r: &mut ChaCha8Rng, m: &IntervalMatrix) -> Vec<f64> {
    let mut p = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            p.push(e.lo() + r.gen::<f64>() * (e.hi() - e.lo()));
        }
    }
    p
}

fn rayleigh(p: &[f64], rows: usize, cols: usize, v: &[f64]) -> f64 {
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut out = 0.0;
    for i in 0..rows {
        let mut acc = 0.0;
        for j in 0..cols {
            acc += p[i * cols + j] * v[j];
        }
        out += acc * acc;
    }
    out.sqrt() / vn
}

#[test]
fn norm_bounds_sandwich_sampled_rayleigh_quotients() {
    let mut r = ChaCha8Rng::seed_from_u64(0xa11ce);
    let mut matrices = 0;
    while matrices < 1_000 {
        let rows = r.gen_range(1..=4);
        let cols = r.gen_range(1..=4);
        let m = random_matrix(&mut r, rows, cols);
        let upper = m.op_norm_upper();
        let lower = m.min_norm_lower();
        assert!(lower >= 0.0);
        assert!(upper >= lower);

        for _ in 0..10 {
            let p = sample_member(&mut r, &m);
            assert!(m.contains_point(&p));
            for _ in 0..10 {
                let v: Vec<f64> = (0..cols).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
                if v.iter().all(|x| x.abs() < 1e-3) {
                    continue;
                }
                let q = rayleigh(&p, rows, cols, &v);
                assert!(
                    q <= upper * (1.0 + 1e-12) + 1e-300,
                    "rayleigh {q} above upper bound {upper} ({rows}x{cols})"
                );
                assert!(
                    lower <= q * (1.0 + 1e-12) + 1e-300,
                    "lower bound {lower} above rayleigh {q} ({rows}x{cols})"
                );
            }
        }
        matrices += 1;
    }
}

#[test]
fn scalar_norm_bounds_are_exact() {
    let m = IntervalMatrix::scalar(Interval::new(-3.0, 2.0).unwrap());
    assert_eq!(m.op_norm_upper(), 3.0);
    assert_eq!(m.min_norm_lower(), 0.0);
    let m = IntervalMatrix::scalar(Interval::new(2.0, 3.0).unwrap());
    assert_eq!(m.min_norm_lower(), 2.0);
}

#[test]
fn min_norm_lower_is_positive_for_well_conditioned_blocks() {
    // Diagonally dominant midpoints with small radii: the Gershgorin
    // route must certify a positive lower bound, and sampled members
    // must respect it.
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut positive = 0;
    for _ in 0..200 {
        let mut m = IntervalMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let c = if i == j {
                    3.0 + r.gen::<f64>()
                } else {
                    (r.gen::<f64>() - 0.5) * 0.2
                };
                let w = r.gen::<f64>() * 0.01;
                m.set(i, j, Interval::new(c - w, c + w).unwrap());
            }
        }
        let lower = m.min_norm_lower();
        if lower > 0.0 {
            positive += 1;
        }
        for _ in 0..50 {
            let p = sample_member(&mut r, &m);
            let v: Vec<f64> = (0..2).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
            if v.iter().all(|x| x.abs() < 1e-3) {
                continue;
            }
            let q = rayleigh(&p, 2, 2, &v);
            assert!(lower <= q * (1.0 + 1e-12));
        }
    }
    assert!(positive > 150, "only {positive}/200 certified positive");
}
