//! Cone-condition algebra.
//!
//! Given the nine block-norm bounds of a local-map derivative enclosure,
//! this module evaluates the quadratic-form distortion coefficients
//! `a`, `b`, `c` and the three inequalities whose joint validity, for some
//! rate `m > 1`, forces the horizontal cone field to be expanded by the
//! map. A rescaled variant covers the base-coordinate dilation
//! `theta -> v * theta` that shrinks the base-to-fiber coupling bound.
//!
//! Rounding is one-sided: a `holds` verdict is rigorous, a failing verdict
//! is advisory only.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::BlockBounds;
use crate::scalar::{sub_down, IntervalScalar};

/// The nine scalar bounds on the blocks of a derivative enclosure:
///
/// ```text
/// |A11| <= c            |A12| <= eps_c        |A13| <= eps_c
/// mu <= |A21|_m,
///       |A21| <= m      alpha <= |A22|_m,
///                       |A22| <= a_sup        |A23| <= eps_u
/// |A31| <= m            |A32| <= eps_s        |A33| <= beta
/// ```
///
/// All fields are nonnegative; `alpha <= a_sup` and `mu <= m` are enforced
/// because lower bounds cannot exceed the matching upper bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds<T> {
    /// Upper bound on the central diagonal block norm.
    pub c: T,
    /// Upper bound on the central-row off-diagonal block norms.
    pub eps_c: T,
    /// Lower bound on the unstable coupling min-norm.
    pub mu: T,
    /// Upper bound on both base-to-fiber coupling block norms.
    pub m: T,
    /// Upper bound on the unstable diagonal block norm.
    pub a_sup: T,
    /// Lower bound on the unstable diagonal block min-norm.
    pub alpha: T,
    /// Upper bound on the unstable-row stable-column block norm.
    pub eps_u: T,
    /// Upper bound on the stable-row unstable-column block norm.
    pub eps_s: T,
    /// Upper bound on the stable diagonal block norm.
    pub beta: T,
}

impl<T: IntervalScalar> DerivativeBounds<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c: T,
        eps_c: T,
        mu: T,
        m: T,
        a_sup: T,
        alpha: T,
        eps_u: T,
        eps_s: T,
        beta: T,
    ) -> Result<Self> {
        let fields = [
            ("c", c),
            ("eps_c", eps_c),
            ("mu", mu),
            ("m", m),
            ("a_sup", a_sup),
            ("alpha", alpha),
            ("eps_u", eps_u),
            ("eps_s", eps_s),
            ("beta", beta),
        ];
        for (name, x) in fields {
            if x.is_nan() || x < T::zero() {
                return Err(Error::InvalidBounds(format!("{name} = {x} must be >= 0")));
            }
        }
        if alpha > a_sup {
            return Err(Error::InvalidBounds(format!(
                "alpha = {alpha} exceeds its upper bound a_sup = {a_sup}"
            )));
        }
        if mu > m {
            return Err(Error::InvalidBounds(format!(
                "mu = {mu} exceeds its upper bound m = {m}"
            )));
        }
        Ok(Self {
            c,
            eps_c,
            mu,
            m,
            a_sup,
            alpha,
            eps_u,
            eps_s,
            beta,
        })
    }

    /// Extracts the nine bounds from a block enclosure with outward
    /// rounding, so every field dominates (or is dominated by, for the
    /// two lower bounds) the corresponding block norm of every member.
    pub fn from_blocks(blocks: &BlockBounds<T>) -> Self {
        Self {
            c: blocks.block(1, 1).op_norm_upper(),
            eps_c: blocks
                .block(1, 2)
                .op_norm_upper()
                .max(blocks.block(1, 3).op_norm_upper()),
            mu: blocks.block(2, 1).min_norm_lower(),
            m: blocks
                .block(2, 1)
                .op_norm_upper()
                .max(blocks.block(3, 1).op_norm_upper()),
            a_sup: blocks.block(2, 2).op_norm_upper(),
            alpha: blocks.block(2, 2).min_norm_lower(),
            eps_u: blocks.block(2, 3).op_norm_upper(),
            eps_s: blocks.block(3, 2).op_norm_upper(),
            beta: blocks.block(3, 3).op_norm_upper(),
        }
    }
}

/// Distortion coefficients of the horizontal quadratic form under a block
/// matrix: for every member `A` and every vector `p = (p1, p2, p3)`,
/// `Q_h(Ap) >= -a|p1|^2 + b|p2|^2 - c|p3|^2` where
/// `Q_h(p) = -|p1|^2 + |p2|^2 - |p3|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcCoefficients<T> {
    /// Rounded up; penalty on the central component.
    pub a: T,
    /// Rounded down; guaranteed expansion of the unstable component.
    /// May be negative, in which case no rate `m > 1` exists.
    pub b: T,
    /// Rounded up; penalty on the stable component.
    pub c: T,
}

/// Outcome of a cone-condition check at rate `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeVerdict<T> {
    /// True iff all inequalities pass under outward rounding.
    pub holds: bool,
    /// The rate that was tested.
    pub m: T,
    /// Smallest slack across the inequalities (pessimistically rounded);
    /// positive iff `holds`.
    pub margin: T,
    /// The base rescaling the verdict refers to, when one was applied.
    pub rescale_v: Option<T>,
    /// Directed bounds of the three left-hand sides, in printed order.
    pub lhs: [T; 3],
}

/// Computes the distortion coefficients from a block enclosure.
///
/// `a` and `c` are rounded up and `b` down, so the quadratic-form lower
/// bound remains valid under floating-point evaluation.
pub fn coeffs_abc<T: IntervalScalar>(blocks: &BlockBounds<T>) -> AbcCoefficients<T> {
    let up = |r, c| Interval::point(blocks.block(r, c).op_norm_upper());
    let low = |r, c| Interval::point(blocks.block(r, c).min_norm_lower());

    let a = up(1, 1).square() - low(2, 1).square()
        + up(3, 1).square()
        + up(1, 1) * (up(1, 2) + up(1, 3))
        + up(2, 1) * (up(2, 2) + up(2, 3))
        + up(3, 1) * (up(3, 2) + up(3, 3));

    let b = -up(1, 2).square() + low(2, 2).square()
        - up(3, 2).square()
        - up(1, 2) * (up(1, 1) + up(1, 3))
        - up(2, 2) * (up(2, 1) + up(2, 3))
        - up(3, 2) * (up(3, 1) + up(3, 3));

    let c = up(1, 3).square() - low(2, 3).square()
        + up(3, 3).square()
        + up(1, 3) * (up(1, 1) + up(1, 2))
        + up(2, 3) * (up(2, 1) + up(2, 2))
        + up(3, 3) * (up(3, 1) + up(3, 2));

    AbcCoefficients {
        a: a.hi(),
        b: b.lo(),
        c: c.hi(),
    }
}

fn require_rate<T: IntervalScalar>(m: T) -> Result<()> {
    if m.is_nan() || m <= T::one() {
        return Err(Error::InvalidRate(format!("{m}")));
    }
    Ok(())
}

/// Shared evaluation of the three inequalities; `v = 1` recovers the
/// unrescaled conditions term for term.
fn cone_lhs<T: IntervalScalar>(b: &DerivativeBounds<T>, v: T) -> [Interval<T>; 3] {
    let p = Interval::<T>::point;
    let two = Interval::point(T::one() + T::one());
    let (c, eps_c) = (p(b.c), p(b.eps_c));
    let (a_sup, alpha, beta) = (p(b.a_sup), p(b.alpha), p(b.beta));
    let (eps_u, eps_s) = (p(b.eps_u), p(b.eps_s));
    let vv = p(v);
    // v > 0 checked by the callers.
    let mu_v = p(b.mu).try_div(vv).expect("v > 0");
    let m_v = p(b.m).try_div(vv).expect("v > 0");
    let veps_c = vv * eps_c;

    let lhs1 = c.square() - mu_v.square()
        + m_v.square()
        + two * c * veps_c
        + m_v * (a_sup + eps_u + eps_s + beta);
    let lhs2 = -veps_c.square() + alpha.square()
        - eps_s.square()
        - veps_c * (c + veps_c)
        - a_sup * (m_v + eps_u)
        - eps_s * (m_v + beta);
    let lhs3 = veps_c.square()
        + beta.square()
        + veps_c * (c + veps_c)
        + eps_u * (m_v + a_sup)
        + beta * (m_v + eps_s);
    [lhs1, lhs2, lhs3]
}

fn verdict_from_lhs<T: IntervalScalar>(
    lhs: [Interval<T>; 3],
    m: T,
    rescale_v: Option<T>,
) -> ConeVerdict<T> {
    let bounds = [lhs[0].hi(), lhs[1].lo(), lhs[2].hi()];
    let slacks = [
        sub_down(m, bounds[0]),
        sub_down(bounds[1], m),
        sub_down(m, bounds[2]),
    ];
    let margin = slacks[0].min(slacks[1]).min(slacks[2]);
    ConeVerdict {
        holds: slacks.iter().all(|&s| s > T::zero()),
        m,
        margin,
        rescale_v,
        lhs: bounds,
    }
}

/// Checks the three cone inequalities at rate `m > 1`:
///
/// ```text
/// c^2 - mu^2 + m^2 + 2 c eps_c + m (a_sup + eps_u + eps_s + beta) < m
/// -eps_c^2 + alpha^2 - eps_s^2 - eps_c (c + eps_c)
///     - a_sup (m + eps_u) - eps_s (m + beta)                      > m
/// eps_c^2 + beta^2 + eps_c (c + eps_c) + eps_u (m + a_sup)
///     + beta (m + eps_s)                                          < m
/// ```
///
/// (lowercase `m` on the left-hand sides is the coupling bound, on the
/// right the rate). Left-hand sides are rounded toward the failing
/// direction, so `holds` is a certificate.
pub fn check_cone_conditions<T: IntervalScalar>(
    b: &DerivativeBounds<T>,
    m: T,
) -> Result<ConeVerdict<T>> {
    require_rate(m)?;
    Ok(verdict_from_lhs(cone_lhs(b, T::one()), m, None))
}

/// Checks the rescaled cone inequalities after the base dilation
/// `theta -> v * theta`, which substitutes `mu/v`, `m/v` and `v * eps_c`.
/// The fourth printed inequality `1 < m` is the rate precondition.
pub fn check_cone_conditions_rescaled<T: IntervalScalar>(
    b: &DerivativeBounds<T>,
    m: T,
    v: T,
) -> Result<ConeVerdict<T>> {
    require_rate(m)?;
    if v.is_nan() || v <= T::zero() {
        return Err(Error::InvalidRescale(format!("{v}")));
    }
    Ok(verdict_from_lhs(cone_lhs(b, v), m, Some(v)))
}

/// Smallest `v` in the doubling sequence `1, 2, 4, ..., 2^64` for which
/// the rescaled conditions hold at rate `m`, or `None` when none does
/// (in particular whenever `m <= 1`, since no rescaling can fix the rate).
pub fn suggest_v<T: IntervalScalar>(b: &DerivativeBounds<T>, m: T) -> Option<T> {
    if m.is_nan() || m <= T::one() {
        return None;
    }
    let two = T::one() + T::one();
    let mut v = T::one();
    for _ in 0..=64 {
        if let Ok(verdict) = check_cone_conditions_rescaled(b, m, v) {
            if verdict.holds {
                return Some(v);
            }
        }
        v = v * two;
    }
    None
}
