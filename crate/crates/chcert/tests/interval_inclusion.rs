//! Inclusion-property oracle for the interval kernel.
//!
//! For random point inputs drawn inside the operand intervals, the exact
//! real result must lie inside the interval result. Exactness comes from
//! `BigRational`: field operations are evaluated exactly, square roots are
//! compared through their squares, and sine/cosine through a Taylor
//! expansion with a rigorous tail bound. The oracle never calls into the
//! interval kernel.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chcert::Interval;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn random_scaled(r: &mut ChaCha8Rng) -> f64 {
    let mag = 10f64.powi(r.gen_range(-8..=4));
    (r.gen::<f64>() - 0.5) * 2.0 * mag
}

fn random_interval(r: &mut ChaCha8Rng) -> Interval {
    let a = random_scaled(r);
    let b = if r.gen_bool(0.1) {
        a
    } else {
        a + r.gen::<f64>() * 10f64.powi(r.gen_range(-10..=2))
    };
    Interval::new(a.min(b), a.max(b)).unwrap()
}

fn random_point_in(r: &mut ChaCha8Rng, iv: &Interval) -> f64 {
    if iv.lo() == iv.hi() {
        return iv.lo();
    }
    let t: f64 = r.gen();
    let x = iv.lo() + t * (iv.hi() - iv.lo());
    x.clamp(iv.lo(), iv.hi())
}

fn assert_contains_exact(result: &Interval, exact: &BigRational, what: &str) {
    assert!(
        rat(result.lo()) <= *exact && *exact <= rat(result.hi()),
        "{what}: exact value escapes the enclosure {result}"
    );
}

#[test]
fn one_hundred_thousand_point_inclusions() {
    let mut r = ChaCha8Rng::seed_from_u64(0x1705_c0de);
    let mut checked = 0usize;

    // Field operations: exact rational comparison.
    for op in 0..4 {
        let n = if op == 3 { 15_000 } else { 25_000 };
        let mut done = 0;
        while done < n {
            let a = random_interval(&mut r);
            let b = random_interval(&mut r);
            let x = random_point_in(&mut r, &a);
            let y = random_point_in(&mut r, &b);
            let (result, exact) = match op {
                0 => (a + b, rat(x) + rat(y)),
                1 => (a - b, rat(x) - rat(y)),
                2 => (a * b, rat(x) * rat(y)),
                _ => {
                    if b.contains(0.0) {
                        continue;
                    }
                    (a.try_div(b).unwrap(), rat(x) / rat(y))
                }
            };
            assert_contains_exact(&result, &exact, ["add", "sub", "mul", "div"][op]);
            done += 1;
            checked += 1;
        }
    }

    // Absolute value and squaring: still exact rationals.
    for _ in 0..5_000 {
        let a = random_interval(&mut r);
        let x = random_point_in(&mut r, &a);
        assert_contains_exact(&a.abs(), &rat(x).abs(), "abs");
        checked += 1;
    }
    for _ in 0..3_000 {
        let a = random_interval(&mut r);
        let x = random_point_in(&mut r, &a);
        assert_contains_exact(&a.square(), &(rat(x) * rat(x)), "square");
        checked += 1;
    }

    // Square root: sqrt(x) in [lo, hi] iff lo^2 <= x and x <= hi^2
    // (endpoints nonnegative), checked exactly.
    let mut done = 0;
    while done < 1_200 {
        let a = random_interval(&mut r);
        if a.lo() < 0.0 {
            continue;
        }
        let x = random_point_in(&mut r, &a);
        let s = a.sqrt().unwrap();
        assert!(s.lo() >= 0.0);
        let xr = rat(x);
        assert!(
            rat(s.lo()) * rat(s.lo()) <= xr && xr <= rat(s.hi()) * rat(s.hi()),
            "sqrt enclosure violated at x = {x}"
        );
        done += 1;
        checked += 1;
    }

    // Sine and cosine against the Taylor oracle.
    for which in [Trig::Sin, Trig::Cos] {
        let mut done = 0;
        while done < 400 {
            let a = random_interval(&mut r);
            let x = random_point_in(&mut r, &a);
            if x.abs() > 8.0 {
                continue;
            }
            let result = match which {
                Trig::Sin => a.sin(),
                Trig::Cos => a.cos(),
            };
            let (olo, ohi) = taylor_enclosure(&rat(x), which);
            assert!(
                rat(result.lo()) <= olo && ohi <= rat(result.hi()),
                "{which:?} enclosure violated at x = {x}: ours {result}"
            );
            done += 1;
            checked += 1;
        }
    }

    assert!(checked >= 100_000, "only {checked} inclusions checked");
    println!("inclusion property verified at {checked} sampled points");
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Trig {
    Sin,
    Cos,
}

/// Taylor enclosure of sin or cos at a rational point with |x| <= 8.
/// Terms are generated until the next term is below 10^-40 and the term
/// ratio is below 1/2, so the tail is bounded by twice the next term.
fn taylor_enclosure(x: &BigRational, which: Trig) -> (BigRational, BigRational) {
    let x2 = x * x;
    let (mut term, mut n) = match which {
        Trig::Sin => (x.clone(), 1u32),
        Trig::Cos => (BigRational::one(), 0u32),
    };
    let mut sum = BigRational::zero();
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10u8).pow(40));
    loop {
        sum += &term;
        let denom = BigInt::from((n + 1) * (n + 2));
        term = -(&term * &x2 / BigRational::from_integer(denom));
        n += 2;
        let ratio_small = x2.clone() / BigRational::from_integer(BigInt::from((n + 1) * (n + 2)))
            < BigRational::new(BigInt::one(), BigInt::from(2));
        if term.abs() < tiny && ratio_small {
            break;
        }
        assert!(n < 400, "taylor loop failed to converge");
    }
    let tail = BigRational::from_integer(BigInt::from(2)) * term.abs();
    (sum.clone() - tail.clone(), sum + tail)
}

#[test]
fn directed_rounding_is_one_ulp_tight() {
    // The EFT rounding should never widen an endpoint by more than one
    // ulp relative to the nearest rounding.
    let mut r = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20_000 {
        let a = random_scaled(&mut r);
        let b = random_scaled(&mut r);
        let s = Interval::point(a) + Interval::point(b);
        let nearest = a + b;
        assert!(s.lo() == nearest || s.lo() == nearest.next_down());
        assert!(s.hi() == nearest || s.hi() == nearest.next_up());

        let p = Interval::point(a) * Interval::point(b);
        let nearest = a * b;
        if nearest.is_finite() {
            assert!(p.lo() == nearest || p.lo() == nearest.next_down());
            assert!(p.hi() == nearest || p.hi() == nearest.next_up());
        }
    }
}

#[test]
fn f32_kernel_smoke() {
    // The kernel is generic; the narrow instantiation must satisfy the
    // same exactness and inclusion basics.
    type I32 = chcert::IntervalF32;
    let a = I32::new(1.0, 2.0).unwrap();
    let b = I32::new(3.0, 4.0).unwrap();
    assert_eq!(a + b, I32::new(4.0, 6.0).unwrap());
    let third = I32::point(1.0).try_div(I32::point(3.0)).unwrap();
    assert!(third.lo() < third.hi());
    assert!(third.lo() as f64 <= 1.0 / 3.0 && 1.0 / 3.0 <= third.hi() as f64);
    let pi = I32::pi();
    assert!((pi.lo() as f64) < std::f64::consts::PI);
    assert!((pi.hi() as f64) > std::f64::consts::PI);
}
