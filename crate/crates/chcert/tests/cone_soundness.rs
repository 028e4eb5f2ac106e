//! Direct-evaluation oracle for the quadratic-form distortion bound.
//!
//! For member matrices `A` of a block enclosure and arbitrary vectors
//! `p = (p1, p2, p3)`, the certified coefficients must satisfy
//! `Q_h(Ap) >= -a |p1|^2 + b |p2|^2 - c |p3|^2` with
//! `Q_h(p) = -|p1|^2 + |p2|^2 - |p3|^2`. The oracle evaluates both sides
//! in plain `f64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chcert::cones::coeffs_abc;
use chcert::matrix::BlockBounds;
use chcert::{Interval, IntervalMatrix};

struct Sampled {
    dims: [usize; 3],
    entries: Vec<f64>,
    n: usize,
}

fn random_blocks(r: &mut ChaCha8Rng, dims: [usize; 3]) -> BlockBounds<f64> {
    let mut blocks = Vec::with_capacity(9);
    for br in 0..3 {
        for bc in 0..3 {
            let mut m = IntervalMatrix::zeros(dims[br], dims[bc]);
            for i in 0..dims[br] {
                for j in 0..dims[bc] {
                    let c = (r.gen::<f64>() - 0.5) * 4.0;
                    let w = r.gen::<f64>() * 0.3;
                    m.set(i, j, Interval::new(c - w, c + w).unwrap());
                }
            }
            blocks.push(m);
        }
    }
    BlockBounds::from_blocks(dims, blocks).unwrap()
}

fn sample_member(r: &mut ChaCha8Rng, b: &BlockBounds<f64>) -> Sampled {
    let dims = b.dims();
    let full = b.to_matrix();
    let n = full.rows();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let e = full.get(i, j);
            entries.push(e.lo() + r.gen::<f64>() * (e.hi() - e.lo()));
        }
    }
    Sampled { dims, entries, n }
}

fn q_h_of_image(s: &Sampled, p: &[f64]) -> f64 {
    let n = s.n;
    let mut image = vec![0.0; n];
    for (i, out) in image.iter_mut().enumerate() {
        *out = s.entries[i * n..(i + 1) * n]
            .iter()
            .zip(p)
            .map(|(a, x)| a * x)
            .sum();
    }
    let c = s.dims[0];
    let u = s.dims[1];
    let sq = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>();
    -sq(&image[..c]) + sq(&image[c..c + u]) - sq(&image[c + u..])
}

#[test]
fn lemma_bound_holds_on_a_million_samples() {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0u64;
    let mut total = 0u64;

    for enc in 0..20 {
        let dims = [
            r.gen_range(1..=2usize),
            r.gen_range(1..=2usize),
            r.gen_range(1..=2usize),
        ];
        let blocks = random_blocks(&mut r, dims);
        let coeffs = coeffs_abc(&blocks);
        let n: usize = dims.iter().sum();

        for _ in 0..50 {
            let member = sample_member(&mut r, &blocks);
            for _ in 0..1_000 {
                let p: Vec<f64> = (0..n).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
                let scale: f64 = p.iter().map(|x| x * x).sum();
                if scale < 1e-12 {
                    continue;
                }
                let c = dims[0];
                let u = dims[1];
                let sq = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>();
                let rhs = -coeffs.a * sq(&p[..c]) + coeffs.b * sq(&p[c..c + u])
                    - coeffs.c * sq(&p[c + u..]);
                let lhs = q_h_of_image(&member, &p);
                // The certified inequality is exact in real arithmetic;
                // allow only the f64 noise of the oracle evaluation.
                if lhs < rhs - 1e-9 * scale.max(1.0) {
                    violations += 1;
                    eprintln!("violation at enclosure {enc}: lhs {lhs} < rhs {rhs}");
                }
                total += 1;
            }
        }
    }
    assert!(total >= 1_000_000 - 20_000, "sampled only {total}");
    assert_eq!(violations, 0, "{violations} violations out of {total}");
    println!("lemma bound verified on {total} (matrix, vector) samples");
}

#[test]
fn point_matrix_example_from_direct_evaluation() {
    // A concrete 3-block point matrix checked against 1e3 vectors.
    let mut r = ChaCha8Rng::seed_from_u64(99);
    let entries: [Interval; 9] = [
        Interval::point(0.8),
        Interval::point(0.1),
        Interval::point(-0.05),
        Interval::point(0.2),
        Interval::point(2.5),
        Interval::point(0.15),
        Interval::point(-0.1),
        Interval::point(0.05),
        Interval::point(0.3),
    ];
    let blocks = BlockBounds::from_scalar_entries(entries);
    let coeffs = coeffs_abc(&blocks);
    let member = Sampled {
        dims: [1, 1, 1],
        entries: entries.iter().map(|e| e.lo()).collect(),
        n: 3,
    };
    for _ in 0..1_000 {
        let p: Vec<f64> = (0..3).map(|_| r.gen::<f64>() * 4.0 - 2.0).collect();
        let rhs = -coeffs.a * p[0] * p[0] + coeffs.b * p[1] * p[1] - coeffs.c * p[2] * p[2];
        let lhs = q_h_of_image(&member, &p);
        assert!(lhs >= rhs - 1e-9);
    }
}
