//! Closed intervals with outward rounding.
//!
//! The inclusion property is the contract everything else builds on: for
//! point inputs `x in a`, `y in b`, the exact real result of an operation
//! lies inside the interval result. Directed rounding is emulated with
//! error-free transformations (2Sum and FMA residuals), so endpoints that
//! are exactly representable stay exact, and inexact ones move outward by
//! a single ulp.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{
    add_down, add_up, div_down, div_up, mul_down, mul_up, sqrt_down, sqrt_up, sub_down, sub_up,
    IntervalScalar,
};

/// A closed real interval `[lo, hi]` with `lo <= hi` and no NaN endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: IntervalScalar> Interval<T> {
    /// Builds `[lo, hi]`, rejecting NaN endpoints and `lo > hi`.
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::BadEndpoints(format!("{lo}"), format!("{hi}")));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub(crate) fn raw(lo: T, hi: T) -> Self {
        debug_assert!(!(lo.is_nan() || hi.is_nan() || lo > hi));
        Self { lo, hi }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: T) -> Self {
        debug_assert!(!x.is_nan());
        Self { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    pub fn one() -> Self {
        Self::point(T::one())
    }

    /// The symmetric interval `[-r, r]`.
    pub fn symmetric(r: T) -> Result<Self> {
        if r.is_nan() || r < T::zero() {
            return Err(Error::BadEndpoints(format!("{}", -r), format!("{r}")));
        }
        Ok(Self { lo: -r, hi: r })
    }

    /// Two-ulp enclosure of a faithfully rounded constant such as `T::PI()`.
    fn enclosing_const(x: T) -> Self {
        Self::raw(x.next_down(), x.next_up())
    }

    /// Rigorous enclosure of pi.
    pub fn pi() -> Self {
        Self::enclosing_const(T::PI())
    }

    /// Rigorous enclosure of 2*pi.
    pub fn two_pi() -> Self {
        Self::pi() * Self::point(T::one() + T::one())
    }

    /// Rigorous enclosure of pi/2.
    pub fn half_pi() -> Self {
        Self::enclosing_const(T::FRAC_PI_2())
    }

    #[inline]
    pub fn lo(&self) -> T {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> T {
        self.hi
    }

    /// Upper bound on the width `hi - lo`.
    pub fn width(&self) -> T {
        sub_up(self.hi, self.lo)
    }

    /// A representative point inside the interval.
    pub fn mid(&self) -> T {
        let half = T::one() / (T::one() + T::one());
        let m = self.lo * half + self.hi * half;
        m.max(self.lo).min(self.hi)
    }

    /// Magnitude `max |x|` over the interval (exact).
    pub fn mag(&self) -> T {
        self.lo.abs().max(self.hi.abs())
    }

    /// Mignitude `min |x|` over the interval (exact; 0 if it contains 0).
    pub fn mig(&self) -> T {
        if self.contains(T::zero()) {
            T::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True when `other` lies inside `self` (closed containment).
    pub fn encloses(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when `self` lies inside `other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        other.encloses(self)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Enclosure of `x^2`; tighter than `self * self` when 0 is interior.
    pub fn square(&self) -> Self {
        if self.lo >= T::zero() {
            Self::raw(mul_down(self.lo, self.lo), mul_up(self.hi, self.hi))
        } else if self.hi <= T::zero() {
            Self::raw(mul_down(self.hi, self.hi), mul_up(self.lo, self.lo))
        } else {
            let m = mul_up(self.lo, self.lo).max(mul_up(self.hi, self.hi));
            Self::raw(T::zero(), m)
        }
    }

    /// Enclosure of `|x|` (exact endpoints).
    pub fn abs(&self) -> Self {
        Self::raw(self.mig(), self.mag())
    }

    /// Enclosure of the quotient; fails when the divisor contains zero.
    pub fn try_div(self, rhs: Self) -> Result<Self> {
        if rhs.contains(T::zero()) {
            return Err(Error::DivisionByZero);
        }
        let cands = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for (a, b) in cands {
            lo = lo.min(div_down(a, b));
            hi = hi.max(div_up(a, b));
        }
        Ok(Self::raw(lo, hi))
    }

    /// Enclosure of the square root; fails when the interval reaches below 0.
    pub fn sqrt(self) -> Result<Self> {
        if self.lo < T::zero() {
            return Err(Error::NegativeSqrt(format!("{}", self.lo)));
        }
        Ok(Self::raw(sqrt_down(self.lo), sqrt_up(self.hi)))
    }

    /// Rigorous enclosure of `sin` over the interval.
    pub fn sin(self) -> Self {
        self.trig(TrigFn::Sin)
    }

    /// Rigorous enclosure of `cos` over the interval.
    pub fn cos(self) -> Self {
        self.trig(TrigFn::Cos)
    }

    fn trig(self, f: TrigFn) -> Self {
        let one = T::one();
        let full = Self::raw(-one, one);

        // Beyond ~2^50 the integer critical-point enumeration would lose
        // exactness; the full range is always a sound answer.
        let big = T::from(1e15).unwrap();
        if self.lo.abs() > big || self.hi.abs() > big {
            return full;
        }
        if sub_up(self.hi, self.lo) >= Self::two_pi().hi {
            return full;
        }

        let (alo, ahi) = trig_eval(self.lo, f);
        let (blo, bhi) = trig_eval(self.hi, f);
        let mut lo = alo.min(blo);
        let mut hi = ahi.max(bhi);

        // Critical points: cos peaks at k*pi, sin at (k + 1/2)*pi.
        let pi = Self::pi();
        let shift = match f {
            TrigFn::Cos => T::zero(),
            TrigFn::Sin => one / (one + one),
        };
        let q = self.try_div(pi).expect("pi does not contain zero");
        let k0 = (q.lo - shift).floor();
        let k1 = (q.hi - shift).ceil();
        let mut k = k0;
        while k <= k1 {
            let at = pi * Self::point(k + shift);
            if at.intersects(&self) {
                // Even multiples give the maximum, odd the minimum, for
                // both cos(k*pi) and sin((k + 1/2)*pi).
                let two = one + one;
                let even = (k / two).floor() * two == k;
                if even {
                    hi = one;
                } else {
                    lo = -one;
                }
            }
            k = k + one;
        }

        Self::raw(lo.max(-one), hi.min(one))
    }
}

#[derive(Clone, Copy)]
enum TrigFn {
    Sin,
    Cos,
}

/// Enclosure of `sin x` or `cos x` at a point, padding the libm result by
/// `TRIG_ERR_ULPS` ulps on each side. Exact at `x == 0`.
fn trig_eval<T: IntervalScalar>(x: T, f: TrigFn) -> (T, T) {
    let one = T::one();
    if x == T::zero() {
        return match f {
            TrigFn::Sin => (T::zero(), T::zero()),
            TrigFn::Cos => (one, one),
        };
    }
    let y = match f {
        TrigFn::Sin => x.sin(),
        TrigFn::Cos => x.cos(),
    };
    let mut lo = y;
    let mut hi = y;
    for _ in 0..T::TRIG_ERR_ULPS {
        lo = lo.next_down();
        hi = hi.next_up();
    }
    (lo.max(-one), hi.min(one))
}

impl<T: IntervalScalar> Add for Interval<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl<T: IntervalScalar> Sub for Interval<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl<T: IntervalScalar> Mul for Interval<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let cands = [
            (self.lo, rhs.lo),
            (self.lo, rhs.hi),
            (self.hi, rhs.lo),
            (self.hi, rhs.hi),
        ];
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for (a, b) in cands {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Self::raw(lo, hi)
    }
}

impl<T: IntervalScalar> Neg for Interval<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::raw(-self.hi, -self.lo)
    }
}

impl<T: IntervalScalar> std::fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
