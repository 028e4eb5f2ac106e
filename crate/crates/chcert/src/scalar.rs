//! Scalar abstraction for the interval kernel.
//!
//! Everything in this crate that rounds is expressed through
//! [`IntervalScalar`], which extends `num_traits::Float` with the two
//! neighbour operations needed for outward rounding. `f32` and `f64`
//! both implement it; the concrete aliases at the crate root fix `f64`.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst};

/// An IEEE binary floating-point type usable as interval endpoint.
pub trait IntervalScalar:
    Float + FloatConst + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Ulps of outward slack applied to libm `sin`/`cos` results, which are
    /// faithful but not correctly rounded.
    const TRIG_ERR_ULPS: u32;

    /// Smallest float strictly greater than `self` (next toward +inf).
    fn next_up(self) -> Self;

    /// Largest float strictly less than `self` (next toward -inf).
    fn next_down(self) -> Self;
}

impl IntervalScalar for f64 {
    const TRIG_ERR_ULPS: u32 = 4;

    #[inline]
    fn next_up(self) -> Self {
        f64::next_up(self)
    }

    #[inline]
    fn next_down(self) -> Self {
        f64::next_down(self)
    }
}

impl IntervalScalar for f32 {
    const TRIG_ERR_ULPS: u32 = 4;

    #[inline]
    fn next_up(self) -> Self {
        f32::next_up(self)
    }

    #[inline]
    fn next_down(self) -> Self {
        f32::next_down(self)
    }
}

/// Knuth's branch-free 2Sum: `a + b = s + e` exactly, with `s = fl(a + b)`.
#[inline]
pub(crate) fn two_sum<T: IntervalScalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `fl(a + b)` rounded toward -inf. A sum that overflows to +inf maps
/// back to the largest finite value, which is a valid lower bound.
#[inline]
pub(crate) fn add_down<T: IntervalScalar>(a: T, b: T) -> T {
    let (s, e) = two_sum(a, b);
    if s.is_infinite() {
        return if s > T::zero() { T::max_value() } else { s };
    }
    if e < T::zero() {
        s.next_down()
    } else {
        s
    }
}

/// `fl(a + b)` rounded toward +inf.
#[inline]
pub(crate) fn add_up<T: IntervalScalar>(a: T, b: T) -> T {
    let (s, e) = two_sum(a, b);
    if s.is_infinite() {
        return if s < T::zero() { -T::max_value() } else { s };
    }
    if e > T::zero() {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_down<T: IntervalScalar>(a: T, b: T) -> T {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up<T: IntervalScalar>(a: T, b: T) -> T {
    add_up(a, -b)
}

/// True when the magnitude is in the subnormal range, where the FMA
/// residual trick below can lose the exact error term.
#[inline]
fn is_tiny<T: IntervalScalar>(x: T) -> bool {
    x != T::zero() && x.abs() < T::min_positive_value()
}

/// `fl(a * b)` rounded toward -inf. Uses the exact FMA residual
/// `e = fma(a, b, -p)`; falls back to a one-ulp nudge for subnormal
/// products and maps -inf overflow back onto the finite range soundly.
#[inline]
pub(crate) fn mul_down<T: IntervalScalar>(a: T, b: T) -> T {
    let p = a * b;
    if p.is_infinite() {
        return if p > T::zero() { T::max_value() } else { p };
    }
    if is_tiny(p) {
        return p.next_down();
    }
    let e = a.mul_add(b, -p);
    if e < T::zero() {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up<T: IntervalScalar>(a: T, b: T) -> T {
    let p = a * b;
    if p.is_infinite() {
        return if p < T::zero() { -T::max_value() } else { p };
    }
    if is_tiny(p) {
        return p.next_up();
    }
    let e = a.mul_add(b, -p);
    if e > T::zero() {
        p.next_up()
    } else {
        p
    }
}

/// `fl(a / b)` rounded toward -inf; `b` must be nonzero.
/// The residual `r = a - q*b` is exact via FMA, and the true quotient
/// satisfies `t = q + r/b`, so `sign(t - q) = sign(r) * sign(b)`.
#[inline]
pub(crate) fn div_down<T: IntervalScalar>(a: T, b: T) -> T {
    let q = a / b;
    if q.is_infinite() {
        return if q > T::zero() { T::max_value() } else { q };
    }
    if is_tiny(q) {
        return q.next_down();
    }
    let r = -(q.mul_add(b, -a));
    if r != T::zero() && ((r > T::zero()) != (b > T::zero())) {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub(crate) fn div_up<T: IntervalScalar>(a: T, b: T) -> T {
    let q = a / b;
    if q.is_infinite() {
        return if q < T::zero() { -T::max_value() } else { q };
    }
    if is_tiny(q) {
        return q.next_up();
    }
    let r = -(q.mul_add(b, -a));
    if r != T::zero() && ((r > T::zero()) == (b > T::zero())) {
        q.next_up()
    } else {
        q
    }
}

/// `fl(sqrt(x))` rounded toward -inf; `x >= 0`.
#[inline]
pub(crate) fn sqrt_down<T: IntervalScalar>(x: T) -> T {
    let s = x.sqrt();
    if is_tiny(s) {
        return s.next_down().max(T::zero());
    }
    let r = -(s.mul_add(s, -x));
    if r < T::zero() {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn sqrt_up<T: IntervalScalar>(x: T) -> T {
    let s = x.sqrt();
    if is_tiny(s) {
        return s.next_up();
    }
    let r = -(s.mul_add(s, -x));
    if r > T::zero() {
        s.next_up()
    } else {
        s
    }
}
