//! Verification of self-covering from derivative enclosures.
//!
//! For every chart triple `(j, i0, i1)` the caller supplies the zero-section
//! image enclosure, the Jacobian block enclosure over the normal
//! neighborhood, and the fiber radii `eps_u`, `eps_s`. The covering
//! relation follows when, for each triple,
//!
//! * the zero-section image stays inside the target window times the
//!   closed `eps_u`/`eps_s` fiber balls,
//! * the unstable block expands: `|A22|_m - |A23| > 1 + eps_u`,
//! * the stable block contracts: `|A32| + |A33| < 1 - eps_s`.
//!
//! The `(0, x, y)` argument in the expansion and contraction quantities
//! zeroes the base component, so the coupling column never participates.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::BlockBounds;
use crate::scalar::{add_up, sub_down, IntervalScalar};

/// Enclosure of `f(theta, 0, 0)` over a base window, split into base and
/// fiber components.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroImageBox<T> {
    /// Base component, in the coordinates of the target chart.
    pub base: Interval<T>,
    /// Unstable fiber components.
    pub unstable: Vec<Interval<T>>,
    /// Stable fiber components.
    pub stable: Vec<Interval<T>>,
}

/// Everything the covering checks need about one chart triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartTripleInput<T> {
    /// Index of the inscribed window `V_j`.
    pub j: usize,
    /// Index of the source chart with `V_j` inside its domain.
    pub i0: usize,
    /// Index of the target chart receiving the image.
    pub i1: usize,
    /// Image of the target chart's domain window (an open interval).
    pub target_window: Interval<T>,
    /// Rigorous enclosure of the zero-section image.
    pub zero_image: ZeroImageBox<T>,
    /// Jacobian block enclosure over the source normal neighborhood.
    pub jac: BlockBounds<T>,
    /// Radius of the closed unstable ball the zero section must land in.
    /// The expansion check clears `1 + eps_u`, so values above 1 are
    /// admissible; they simply demand more expansion.
    pub eps_u: T,
    /// Radius of the closed stable ball; contraction can only clear
    /// `1 - eps_s` when `eps_s < 1`.
    pub eps_s: T,
}

impl<T: IntervalScalar> ChartTripleInput<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        j: usize,
        i0: usize,
        i1: usize,
        target_window: Interval<T>,
        zero_image: ZeroImageBox<T>,
        jac: BlockBounds<T>,
        eps_u: T,
        eps_s: T,
    ) -> Result<Self> {
        if !(eps_u.is_finite() && eps_u > T::zero()) || !(eps_s.is_finite() && eps_s > T::zero()) {
            return Err(Error::InvalidBounds(format!(
                "fiber radii must be positive and finite, got eps_u = {eps_u}, eps_s = {eps_s}"
            )));
        }
        let dims = jac.dims();
        if zero_image.unstable.len() != dims[1] || zero_image.stable.len() != dims[2] {
            return Err(Error::DimensionMismatch(format!(
                "zero image fibers {}x{} do not match jacobian dims (u, s) = ({}, {})",
                zero_image.unstable.len(),
                zero_image.stable.len(),
                dims[1],
                dims[2]
            )));
        }
        Ok(Self {
            j,
            i0,
            i1,
            target_window,
            zero_image,
            jac,
            eps_u,
            eps_s,
        })
    }
}

/// Per-triple diagnostics retained in the covering verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleDiagnostics<T> {
    pub j: usize,
    pub i0: usize,
    pub i1: usize,
    /// Zero-section image inside the window-times-balls product.
    pub zero_image_ok: bool,
    /// Upper bound on the unstable zero-image fiber norm.
    pub zero_u_norm: T,
    /// Upper bound on the stable zero-image fiber norm.
    pub zero_s_norm: T,
    /// Base component strictly inside the open target window.
    pub base_inside: bool,
    /// Rigorous lower bound of the expansion quantity.
    pub expansion_lower: T,
    pub expansion_ok: bool,
    /// Rigorous upper bound of the contraction quantity.
    pub contraction_upper: T,
    pub contraction_ok: bool,
    /// All three checks passed.
    pub holds: bool,
}

/// Aggregate covering verdict; `holds` iff every triple passes all three
/// checks. Diagnostics are ordered by position in the input slice.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringVerdict<T> {
    pub holds: bool,
    pub diagnostics: Vec<TripleDiagnostics<T>>,
}

/// Upper bound on the Euclidean norm over a box of fiber intervals.
/// One-dimensional fibers use the exact magnitude so an enclosure that
/// exactly fills the closed ball still passes.
fn fiber_norm_upper<T: IntervalScalar>(fibers: &[Interval<T>]) -> T {
    match fibers {
        [] => T::zero(),
        [single] => single.mag(),
        many => {
            let mut acc = Interval::zero();
            for f in many {
                acc = acc + Interval::point(f.mag()).square();
            }
            acc.sqrt().expect("sum of squares is nonnegative").hi()
        }
    }
}

/// Checks the zero-section image containment
/// `f(theta, 0, 0) in window x closed B_u(0, eps_u) x closed B_s(0, eps_s)`.
/// The base must lie strictly inside the open window; the fiber balls are
/// closed. Fails on fiber/Jacobian dimension mismatch.
pub fn check_zero_image<T: IntervalScalar>(t: &ChartTripleInput<T>) -> Result<bool> {
    let dims = t.jac.dims();
    if t.zero_image.unstable.len() != dims[1] || t.zero_image.stable.len() != dims[2] {
        return Err(Error::DimensionMismatch(
            "zero image fibers do not match jacobian block dims".into(),
        ));
    }
    let base = t.target_window.lo() < t.zero_image.base.lo()
        && t.zero_image.base.hi() < t.target_window.hi();
    let u_ok = fiber_norm_upper(&t.zero_image.unstable) <= t.eps_u;
    let s_ok = fiber_norm_upper(&t.zero_image.stable) <= t.eps_s;
    Ok(base && u_ok && s_ok)
}

/// Rigorous lower bound on
/// `inf { |pi_x A (0, x, y)| : |x| = 1, |y| <= 1 }` over all members:
/// `|A22|_m - |A23|`.
pub fn expansion_lower_bound<T: IntervalScalar>(t: &ChartTripleInput<T>) -> T {
    sub_down(
        t.jac.block(2, 2).min_norm_lower(),
        t.jac.block(2, 3).op_norm_upper(),
    )
}

/// Tests the expansion inequality `|A22|_m - |A23| > 1 + eps_u`.
pub fn check_expansion<T: IntervalScalar>(t: &ChartTripleInput<T>) -> bool {
    expansion_lower_bound(t) > add_up(T::one(), t.eps_u)
}

/// Rigorous upper bound on
/// `sup { |pi_y A (0, x, y)| : |x| <= 1, |y| <= 1 }` over all members:
/// `|A32| + |A33|`.
pub fn contraction_upper_bound<T: IntervalScalar>(t: &ChartTripleInput<T>) -> T {
    add_up(
        t.jac.block(3, 2).op_norm_upper(),
        t.jac.block(3, 3).op_norm_upper(),
    )
}

/// Tests the contraction inequality `|A32| + |A33| < 1 - eps_s`.
pub fn check_contraction<T: IntervalScalar>(t: &ChartTripleInput<T>) -> bool {
    contraction_upper_bound(t) < sub_down(T::one(), t.eps_s)
}

fn diagnose<T: IntervalScalar>(t: &ChartTripleInput<T>) -> Result<TripleDiagnostics<T>> {
    let zero_image_ok = check_zero_image(t)?;
    let expansion_lower = expansion_lower_bound(t);
    let expansion_ok = check_expansion(t);
    let contraction_upper = contraction_upper_bound(t);
    let contraction_ok = check_contraction(t);
    Ok(TripleDiagnostics {
        j: t.j,
        i0: t.i0,
        i1: t.i1,
        zero_image_ok,
        zero_u_norm: fiber_norm_upper(&t.zero_image.unstable),
        zero_s_norm: fiber_norm_upper(&t.zero_image.stable),
        base_inside: t.target_window.lo() < t.zero_image.base.lo()
            && t.zero_image.base.hi() < t.target_window.hi(),
        expansion_lower,
        expansion_ok,
        contraction_upper,
        contraction_ok,
        holds: zero_image_ok && expansion_ok && contraction_ok,
    })
}

/// Runs all three checks on every triple. The caller asserts that the
/// triples cover every inscribed window of the atlas at least once.
pub fn check_covering<T: IntervalScalar>(
    triples: &[ChartTripleInput<T>],
) -> Result<CoveringVerdict<T>> {
    if triples.is_empty() {
        return Err(Error::EmptyCovering);
    }
    let diagnostics: Vec<_> = triples.iter().map(diagnose).collect::<Result<_>>()?;
    Ok(CoveringVerdict {
        holds: diagnostics.iter().all(|d| d.holds),
        diagnostics,
    })
}

/// Same as [`check_covering`] but evaluating triples across `threads`
/// worker threads. Diagnostics are merged in input order, so the result
/// is identical to the sequential one.
pub fn check_covering_parallel<T: IntervalScalar>(
    triples: &[ChartTripleInput<T>],
    threads: usize,
) -> Result<CoveringVerdict<T>> {
    if triples.is_empty() {
        return Err(Error::EmptyCovering);
    }
    let threads = threads.max(1).min(triples.len());
    if threads == 1 {
        return check_covering(triples);
    }
    let chunk = triples.len().div_ceil(threads);
    let results: Vec<Result<Vec<TripleDiagnostics<T>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = triples
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(diagnose).collect::<Result<Vec<_>>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("covering worker panicked"))
            .collect()
    });
    let mut diagnostics = Vec::with_capacity(triples.len());
    for r in results {
        diagnostics.extend(r?);
    }
    Ok(CoveringVerdict {
        holds: diagnostics.iter().all(|d| d.holds),
        diagnostics,
    })
}
