//! Sampling oracle for the covering checks: when the expansion check
//! passes, every sampled member matrix and admissible vector must clear
//! the threshold, and dually for contraction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chcert::covering::{
    check_contraction, check_covering, check_expansion, ChartTripleInput, ZeroImageBox,
};
use chcert::matrix::BlockBounds;
use chcert::{Interval, IntervalMatrix};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn triple_with_fiber_blocks(u: usize, s: usize, r: &mut ChaCha8Rng) -> ChartTripleInput<f64> {
    let dims = [1usize, u, s];
    let mut blocks = Vec::with_capacity(9);
    for br in 0..3 {
        for bc in 0..3 {
            let mut m = IntervalMatrix::zeros(dims[br], dims[bc]);
            for i in 0..dims[br] {
                for j in 0..dims[bc] {
                    let (c, w) = match (br, bc) {
                        (1, 1) => {
                            let diag = if i == j { 3.0 + r.gen::<f64>() } else { 0.0 };
                            (diag, 0.05 * r.gen::<f64>())
                        }
                        (2, 2) => {
                            let diag = if i == j { 0.2 * r.gen::<f64>() } else { 0.0 };
                            (diag, 0.02 * r.gen::<f64>())
                        }
                        (1, 2) | (2, 1) => (0.0, 0.05 * r.gen::<f64>()),
                        _ => (0.0, 0.0),
                    };
                    m.set(i, j, iv(c - w, c + w));
                }
            }
            blocks.push(m);
        }
    }
    let jac = BlockBounds::from_blocks(dims, blocks).unwrap();
    ChartTripleInput::new(
        0,
        0,
        0,
        iv(0.0, 9.0),
        ZeroImageBox {
            base: iv(1.0, 6.0),
            unstable: vec![Interval::zero(); u],
            stable: vec![Interval::zero(); s],
        },
        jac,
        0.5,
        0.5,
    )
    .unwrap()
}

fn sample_block(r: &mut ChaCha8Rng, m: &IntervalMatrix) -> Vec<f64> {
    (0..m.rows())
        .flat_map(|i| {
            (0..m.cols())
                .map(|j| {
                    let e = m.get(i, j);
                    e.lo() + r.gen::<f64>() * (e.hi() - e.lo())
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn unit_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn ball_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v = unit_vector(r, n);
    let scale = r.gen::<f64>();
    v.into_iter().map(|x| x * scale).collect()
}

fn apply(block: &[f64], rows: usize, cols: usize, v: &[f64]) -> Vec<f64> {
    (0..rows)
        .map(|i| (0..cols).map(|j| block[i * cols + j] * v[j]).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn expansion_and_contraction_verdicts_survive_ten_thousand_samples() {
    let mut r = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut samples = 0u64;
    while samples < 10_000 {
        let u = r.gen_range(1..=2usize);
        let s = r.gen_range(1..=2usize);
        let t = triple_with_fiber_blocks(u, s, &mut r);
        if !(check_expansion(&t) && check_contraction(&t)) {
            continue;
        }
        for _ in 0..25 {
            let a22 = sample_block(&mut r, t.jac.block(2, 2));
            let a23 = sample_block(&mut r, t.jac.block(2, 3));
            let a32 = sample_block(&mut r, t.jac.block(3, 2));
            let a33 = sample_block(&mut r, t.jac.block(3, 3));
            let x = unit_vector(&mut r, u);
            let y = ball_vector(&mut r, s);

            // |pi_x A (0, x, y)| with |x| = 1, |y| <= 1 must exceed 1 + eps_u.
            let img_u: Vec<f64> = apply(&a22, u, u, &x)
                .iter()
                .zip(apply(&a23, u, s, &y))
                .map(|(p, q)| p + q)
                .collect();
            assert!(
                norm(&img_u) > 1.0 + t.eps_u - 1e-9,
                "expansion violated: {} vs {}",
                norm(&img_u),
                1.0 + t.eps_u
            );

            // |pi_y A (0, x, y)| with |x| <= 1, |y| <= 1 must stay below
            // 1 - eps_s.
            let xb = ball_vector(&mut r, u);
            let img_s: Vec<f64> = apply(&a32, s, u, &xb)
                .iter()
                .zip(apply(&a33, s, s, &y))
                .map(|(p, q)| p + q)
                .collect();
            assert!(
                norm(&img_s) < 1.0 - t.eps_s + 1e-9,
                "contraction violated: {} vs {}",
                norm(&img_s),
                1.0 - t.eps_s
            );
            samples += 2;
        }
    }
    println!("covering verdicts confirmed on {samples} member samples");
}

#[test]
fn verdicts_are_bit_for_bit_deterministic() {
    let mut r = ChaCha8Rng::seed_from_u64(123);
    let triples: Vec<_> = (0..16)
        .map(|_| triple_with_fiber_blocks(2, 1, &mut r))
        .collect();
    let first = check_covering(&triples).unwrap();
    let second = check_covering(&triples).unwrap();
    assert_eq!(first, second);
}
