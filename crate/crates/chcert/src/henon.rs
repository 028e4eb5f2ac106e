//! The rotating Henon map application.
//!
//! The map on `T^1 x R^2` is
//!
//! ```text
//! theta -> theta + omega (mod 1)
//! x     -> 1 + y - a x^2 + eps cos(2 pi theta)
//! y     -> b x
//! ```
//!
//! Around the hyperbolic fixed point `(x_-, y_-)` of the unperturbed map,
//! a scaled eigenframe turns the fiber derivative into
//! `diag(lambda1, lambda2)` plus a perturbation affine in `eps`. This
//! module computes rigorous enclosures of those derivatives in the bundle
//! coordinates over the circle atlas `R/v`, assembles the block-norm
//! bounds, and certifies the covering and cone inequalities together with
//! the region bound that places the invariant circle inside
//! `U_eps = T^1 x [x_- +- 1.1 eps] x [y_- +- 0.12 eps]`.
//!
//! Two enclosures exist for each direction: a direct one evaluated from
//! the exact remainder formula, and the coarser fixed-coefficient one the
//! verification inequalities are stated with. The direct one must land
//! inside the coarse one; the certificate records that containment.

use crate::atlas::CircleAtlas;
use crate::certificate::{InequalityRecord, Relation, VerificationCertificate};
use crate::cones::{check_cone_conditions, ConeVerdict, DerivativeBounds};
use crate::covering::{check_covering_parallel, ChartTripleInput, CoveringVerdict, ZeroImageBox};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::{BlockBounds, IntervalMatrix};
use crate::scalar::{add_up, sub_down, sub_up};

type Iv = Interval<f64>;

/// Fractional part of the golden mean, the default rotation number.
pub const GOLDEN_MEAN_FRAC: f64 = 0.618_033_988_749_894_9;

/// Default atlas circumference the escalation starts from.
const V_START: u64 = 1 << 10;
/// Escalation cap. Whenever the covering inequalities (which do not
/// depend on the circumference) are satisfiable at all, the coupling
/// bound drops below any fixed slack well before this.
const V_CAP: u64 = 1 << 16;
/// Slack the cone margins must retain after the coupling contribution.
const V_SLACK: f64 = 1e-6;
/// Resolution of the certified-epsilon bisection grid.
const SCAN_RESOLUTION: f64 = 1.0 / (1 << 20) as f64;

/// Parameters of the rotating Henon verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenonParams {
    /// Quadratic coefficient (0.68 in the reference setup).
    pub a: f64,
    /// Dissipation coefficient (0.1); must be nonzero for invertibility.
    pub b: f64,
    /// Rotation number; enters no inequality, only window bookkeeping.
    pub omega: f64,
    /// Perturbation size.
    pub epsilon: f64,
    /// Unstable-direction rescaling of the eigenframe.
    pub tau: f64,
    /// Stable-direction rescaling of the eigenframe.
    pub eta: f64,
    /// Atlas circumference; `None` selects it by doubling escalation.
    pub v: Option<u64>,
}

impl HenonParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: f64,
        b: f64,
        omega: f64,
        epsilon: f64,
        tau: f64,
        eta: f64,
        v: Option<u64>,
    ) -> Result<Self> {
        for (name, x) in [
            ("a", a),
            ("b", b),
            ("omega", omega),
            ("epsilon", epsilon),
            ("tau", tau),
            ("eta", eta),
        ] {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {x} is not finite")));
            }
        }
        if a == 0.0 {
            return Err(Error::InvalidParams("a must be nonzero".into()));
        }
        if b == 0.0 {
            return Err(Error::InvalidParams(
                "b must be nonzero for the map to be invertible".into(),
            ));
        }
        if (1.0 - b) * (1.0 - b) + 4.0 * a <= 0.0 {
            return Err(Error::InvalidParams(
                "(1 - b)^2 + 4a must be positive for real fixed points".into(),
            ));
        }
        if tau <= 0.0 || eta <= 0.0 {
            return Err(Error::InvalidParams("tau and eta must be positive".into()));
        }
        if epsilon < 0.0 {
            return Err(Error::InvalidParams(format!(
                "epsilon = {epsilon} must be nonnegative"
            )));
        }
        if let Some(v) = v {
            if v < 9 {
                return Err(Error::AtlasTooSmall(v));
            }
            // One chart triple is built per window; keep the explicit
            // size within what that can reasonably allocate.
            if v > (1 << 20) {
                return Err(Error::InvalidParams(format!(
                    "v = {v} exceeds the supported atlas size 2^20"
                )));
            }
        }
        Ok(Self {
            a,
            b,
            omega,
            epsilon,
            tau,
            eta,
            v,
        })
    }

    /// The reference parameters: a = 0.68, b = 0.1, eps = 1/2, tau = 3,
    /// eta = 3/40, golden-mean rotation, auto-selected atlas size.
    pub fn paper() -> Self {
        Self {
            a: 0.68,
            b: 0.1,
            omega: GOLDEN_MEAN_FRAC,
            epsilon: 0.5,
            tau: 3.0,
            eta: 0.075,
            v: None,
        }
    }

    /// Same parameters at a different perturbation size.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon = {epsilon} must be nonnegative"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }
}

/// The scaled eigenframe at the fixed point, with all derived spectral
/// data as rigorous enclosures. The stored frame matrices are the
/// eps-independent combinations `eps * Phi_eps` and `Phi_eps^{-1} / eps`,
/// which stay finite at eps = 0; their product already encloses the
/// identity and their conjugation of the fiber derivative encloses
/// `diag(lambda1, lambda2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanFrame {
    pub x_minus: Iv,
    pub y_minus: Iv,
    /// Expanding eigenvalue (about 2.8144 at the reference parameters).
    pub lambda1: Iv,
    /// Contracting eigenvalue (about -0.035531).
    pub lambda2: Iv,
    /// `1 / (lambda2 - lambda1)`.
    pub kappa: Iv,
    /// `eps * Phi_eps`.
    pub phi_times_eps: IntervalMatrix<f64>,
    /// `Phi_eps^{-1} / eps`.
    pub phi_inv_over_eps: IntervalMatrix<f64>,
}

impl JordanFrame {
    /// The frame `Phi_eps` itself; undefined at eps = 0.
    pub fn phi(&self, epsilon: f64) -> Result<IntervalMatrix<f64>> {
        if epsilon <= 0.0 {
            return Err(Error::InvalidParams(
                "Phi_eps is undefined at epsilon = 0".into(),
            ));
        }
        let inv_eps = Iv::one().try_div(Iv::point(epsilon))?;
        Ok(self.phi_times_eps.scale(inv_eps))
    }

    /// The inverse frame `Phi_eps^{-1}`.
    pub fn phi_inv(&self, epsilon: f64) -> IntervalMatrix<f64> {
        self.phi_inv_over_eps.scale(Iv::point(epsilon))
    }
}

/// Fixed point `(x_-, y_-)` of the unperturbed map from raw coefficients;
/// `b = 0` is admitted here (the map is then not invertible, but the
/// fixed point is still defined).
pub fn fixed_point_raw(a: f64, b: f64) -> Result<(Iv, Iv)> {
    if a == 0.0 {
        return Err(Error::InvalidParams("a must be nonzero".into()));
    }
    let a_iv = Iv::point(a);
    let b_iv = Iv::point(b);
    let one = Iv::one();
    let disc = (one - b_iv).square() + Iv::point(4.0) * a_iv;
    if disc.lo() < 0.0 {
        return Err(Error::InvalidParams(format!(
            "(1 - b)^2 + 4a touches negative: {disc}"
        )));
    }
    let two_a = Iv::point(2.0) * a_iv;
    let x = (-(one - b_iv) - disc.sqrt()?).try_div(two_a)?;
    let y = b_iv * x;
    Ok((x, y))
}

/// Fixed point enclosure for a parameter set.
pub fn fixed_point(p: &HenonParams) -> Result<(Iv, Iv)> {
    fixed_point_raw(p.a, p.b)
}

/// Eigenvalues, kappa, and the scaled frame matrices at the fixed point.
pub fn eigen_data(p: &HenonParams) -> Result<JordanFrame> {
    let (x, y) = fixed_point(p)?;
    let a_iv = Iv::point(p.a);
    let one = Iv::one();

    let rad = Iv::point(p.b) + a_iv.square() * x.square();
    if rad.lo() <= 0.0 {
        return Err(Error::DegenerateSpectrum(format!(
            "b + a^2 x^2 = {rad} does not separate the eigenvalues"
        )));
    }
    let root = rad.sqrt()?;
    let minus_ax = -(a_iv * x);
    let lambda1 = minus_ax + root;
    let lambda2 = minus_ax - root;
    let kappa = one
        .try_div(lambda2 - lambda1)
        .map_err(|_| Error::DegenerateSpectrum("lambda1 = lambda2: kappa undefined".into()))?;

    let tau = Iv::point(p.tau);
    let eta = Iv::point(p.eta);
    let phi_times_eps = IntervalMatrix::from_rows(&[
        vec![(-lambda1).try_div(tau)?, (-one).try_div(tau)?],
        vec![lambda2.try_div(eta)?, one.try_div(eta)?],
    ])?;
    let phi_inv_over_eps = IntervalMatrix::from_rows(&[
        vec![kappa * tau, kappa * eta],
        vec![-(kappa * tau * lambda2), -(kappa * eta * lambda1)],
    ])?;

    Ok(JordanFrame {
        x_minus: x,
        y_minus: y,
        lambda1,
        lambda2,
        kappa,
        phi_times_eps,
        phi_inv_over_eps,
    })
}

fn unit() -> Iv {
    Iv::new(-1.0, 1.0).expect("valid endpoints")
}

/// Shared pieces of the four enclosure builders.
struct EnclosureCtx {
    eps: Iv,
    tau: Iv,
    eta: Iv,
    eta_over_tau: Iv,
    tau_over_eta: Iv,
    /// Coupling column magnitudes `eps 2 pi kappa / (v tau)` and
    /// `eps 2 pi kappa / (v eta)`, as symmetric intervals scaled by the
    /// given numerator factor.
    v: Iv,
}

impl EnclosureCtx {
    fn new(p: &HenonParams, v: u64) -> Self {
        let tau = Iv::point(p.tau);
        let eta = Iv::point(p.eta);
        Self {
            eps: Iv::point(p.epsilon),
            tau,
            eta,
            eta_over_tau: eta.try_div(tau).expect("tau > 0"),
            tau_over_eta: tau.try_div(eta).expect("eta > 0"),
            v: Iv::point(v as f64),
        }
    }

    /// `eps * 2 pi * kappa * extra / (v * den) * [-1, 1]`.
    fn coupling(&self, kappa: Iv, extra: Iv, den: Iv) -> Iv {
        (self.eps * Iv::two_pi() * kappa * extra)
            .try_div(self.v * den)
            .expect("v, tau, eta > 0")
            * unit()
    }
}

/// Direct enclosure of the forward differential in bundle coordinates:
/// fiber block `J + R_eps` evaluated from the remainder formula over the
/// unit fiber box, coupling column from the forcing term. Blocks are in
/// `(theta, x, y)` order with `x` unstable.
pub fn forward_jac_enclosure(p: &HenonParams, frame: &JordanFrame, v: u64) -> BlockBounds<f64> {
    let ctx = EnclosureCtx::new(p, v);
    let span = ctx.tau * unit() + ctx.eta * unit();
    let factor = Iv::point(-2.0) * Iv::point(p.a) * ctx.eps * frame.kappa.square() * span;

    let r11 = factor * -frame.lambda1;
    let r12 = factor * -(ctx.eta_over_tau * frame.lambda1);
    let r21 = factor * (ctx.tau_over_eta * frame.lambda2);
    let r22 = factor * frame.lambda2;

    let a21 = ctx.coupling(frame.kappa, frame.lambda1, ctx.tau);
    let a31 = ctx.coupling(frame.kappa, frame.lambda2, ctx.eta);

    BlockBounds::from_scalar_entries([
        Iv::one(),
        Iv::zero(),
        Iv::zero(),
        a21,
        frame.lambda1 + r11,
        r12,
        a31,
        r21,
        frame.lambda2 + r22,
    ])
}

/// The printed fixed-coefficient enclosure the forward inequalities are
/// stated with: fiber perturbation
/// `eps (tau + eta) [[+-1/2, +-(eta/tau)/2], [+-(6/1000)(tau/eta), +-6/1000]]`.
pub fn paper_forward_enclosure(p: &HenonParams, frame: &JordanFrame, v: u64) -> BlockBounds<f64> {
    let ctx = EnclosureCtx::new(p, v);
    let per = ctx.eps * (ctx.tau + ctx.eta).abs();
    let half = Iv::point(0.5);
    let six_over_1000 = Iv::point(6.0).try_div(Iv::point(1000.0)).expect("nonzero");

    let a21 = ctx.coupling(frame.kappa, frame.lambda1, ctx.tau);
    let a31 = ctx.coupling(frame.kappa, frame.lambda2, ctx.eta);

    BlockBounds::from_scalar_entries([
        Iv::one(),
        Iv::zero(),
        Iv::zero(),
        a21,
        frame.lambda1 + per * half * unit(),
        per * half * ctx.eta_over_tau * unit(),
        a31,
        per * six_over_1000 * ctx.tau_over_eta * unit(),
        frame.lambda2 + per * six_over_1000 * unit(),
    ])
}

/// Direct enclosure of the backward differential, in the original
/// `(theta, x, y)` order; the unstable/stable roles are swapped by the
/// consumers.
pub fn backward_jac_enclosure(
    p: &HenonParams,
    frame: &JordanFrame,
    v: u64,
) -> Result<BlockBounds<f64>> {
    let ctx = EnclosureCtx::new(p, v);
    let span = ctx.tau * frame.lambda2 * unit() + ctx.eta * frame.lambda1 * unit();
    let factor = Iv::point(2.0)
        * Iv::point(p.a).try_div(Iv::point(p.b).square())?
        * ctx.eps
        * frame.kappa.square()
        * span;

    let inv_l1 = Iv::one()
        .try_div(frame.lambda1)
        .map_err(|_| Error::DegenerateSpectrum("lambda1 encloses zero".into()))?;
    let inv_l2 = Iv::one()
        .try_div(frame.lambda2)
        .map_err(|_| Error::DegenerateSpectrum("lambda2 encloses zero".into()))?;

    let r11 = factor * -frame.lambda2;
    let r12 = factor * -(ctx.eta_over_tau * frame.lambda1);
    let r21 = factor * (ctx.tau_over_eta * frame.lambda2);
    let r22 = factor * frame.lambda1;

    let a21 = ctx.coupling(frame.kappa, Iv::one(), ctx.tau);
    let a31 = ctx.coupling(frame.kappa, Iv::one(), ctx.eta);

    Ok(BlockBounds::from_scalar_entries([
        Iv::one(),
        Iv::zero(),
        Iv::zero(),
        a21,
        inv_l1 + r11,
        r12,
        a31,
        r21,
        inv_l2 + r22,
    ]))
}

/// The printed fixed-coefficient backward enclosure: fiber perturbation
/// `eps (tau |l2| + eta |l1|) [[+-6/10, +-50 eta/tau], [+-(tau/eta) 6/10, +-50]]`
/// in `(theta, x, y)` order.
pub fn paper_backward_enclosure(
    p: &HenonParams,
    frame: &JordanFrame,
    v: u64,
) -> Result<BlockBounds<f64>> {
    let ctx = EnclosureCtx::new(p, v);
    let s = ctx.eps * (ctx.tau * frame.lambda2.abs() + ctx.eta * frame.lambda1.abs());
    let six_over_10 = Iv::point(6.0).try_div(Iv::point(10.0)).expect("nonzero");
    let fifty = Iv::point(50.0);

    let inv_l1 = Iv::one()
        .try_div(frame.lambda1)
        .map_err(|_| Error::DegenerateSpectrum("lambda1 encloses zero".into()))?;
    let inv_l2 = Iv::one()
        .try_div(frame.lambda2)
        .map_err(|_| Error::DegenerateSpectrum("lambda2 encloses zero".into()))?;

    let a21 = ctx.coupling(frame.kappa, Iv::one(), ctx.tau);
    let a31 = ctx.coupling(frame.kappa, Iv::one(), ctx.eta);

    Ok(BlockBounds::from_scalar_entries([
        Iv::one(),
        Iv::zero(),
        Iv::zero(),
        a21,
        inv_l1 + s * six_over_10 * unit(),
        s * fifty * ctx.eta_over_tau * unit(),
        a31,
        s * six_over_10 * ctx.tau_over_eta * unit(),
        inv_l2 + s * fifty * unit(),
    ]))
}

/// Block-norm bounds for the forward cone check, extracted from the
/// printed enclosure with outward rounding.
pub fn assemble_forward_bounds(
    p: &HenonParams,
    frame: &JordanFrame,
    v: u64,
) -> DerivativeBounds<f64> {
    DerivativeBounds::from_blocks(&paper_forward_enclosure(p, frame, v))
}

/// Block-norm bounds for the backward cone check; the unstable and stable
/// roles are reversed relative to the forward map.
pub fn assemble_backward_bounds(
    p: &HenonParams,
    frame: &JordanFrame,
    v: u64,
) -> Result<DerivativeBounds<f64>> {
    Ok(DerivativeBounds::from_blocks(
        &paper_backward_enclosure(p, frame, v)?.swap_unstable_stable(),
    ))
}

/// Direction selector for the shared triple builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapDirection {
    Forward,
    Backward,
}

/// Builds one chart triple per inscribed window `V_j`. The base rotation
/// is rigid, so the Jacobian enclosure and fiber bounds are uniform; only
/// the window bookkeeping varies with `j`.
pub fn chart_triples(
    p: &HenonParams,
    frame: &JordanFrame,
    atlas: &CircleAtlas<f64>,
    direction: MapDirection,
) -> Result<Vec<ChartTripleInput<f64>>> {
    let v = atlas.v();
    let vf = v as f64;

    let (jac, eps_u, eps_s) = match direction {
        MapDirection::Forward => {
            let jac = paper_forward_enclosure(p, frame, v);
            let eps_u = frame.lambda1.abs().try_div(Iv::point(p.tau))?.hi();
            let eps_s = frame.lambda2.abs().try_div(Iv::point(p.eta))?.hi();
            (jac, eps_u, eps_s)
        }
        MapDirection::Backward => {
            let jac = paper_backward_enclosure(p, frame, v)?.swap_unstable_stable();
            let eps_u = Iv::one().try_div(Iv::point(p.eta))?.hi();
            let eps_s = Iv::one().try_div(Iv::point(p.tau))?.hi();
            (jac, eps_u, eps_s)
        }
    };

    // Rotation offset of the base circle, as a rigorous enclosure.
    let w = match direction {
        MapDirection::Forward => Iv::point(vf) * Iv::point(p.omega),
        MapDirection::Backward => -(Iv::point(vf) * Iv::point(p.omega)),
    };

    let window_len = 5.0;
    let mut triples = Vec::with_capacity(v as usize);
    for j in 0..v {
        let i0 = (j + v - 2) % v;
        // Image arc starts at j + w; picking the chart half a cell below
        // keeps the offset near [0.5, 1.5], well inside the (0, 4) band
        // that the length-5 arc needs inside a length-9 window.
        let s = Iv::point(j as f64) + w;
        let i1_raw = (s.lo() - 0.5).floor();
        let i1 = (((i1_raw as i64) % (v as i64) + v as i64) % (v as i64)) as u64;

        let offset = s - Iv::point(i1_raw);
        let base = Iv::point(i1 as f64) + offset + Iv::new(0.0, window_len)?;
        let target_window = Iv::new(i1 as f64, i1 as f64 + 9.0)?;

        let zero_image = ZeroImageBox {
            base,
            unstable: vec![Iv::symmetric(eps_u)?],
            stable: vec![Iv::symmetric(eps_s)?],
        };
        triples.push(ChartTripleInput::new(
            j as usize,
            i0 as usize,
            i1 as usize,
            target_window,
            zero_image,
            jac.clone(),
            eps_u,
            eps_s,
        )?);
    }
    Ok(triples)
}

/// Selects the atlas circumference: an explicit choice wins; otherwise
/// doubling escalation from 2^10 until the requested cone checks retain
/// a margin of at least 1e-6, capped at 2^16. The covering inequalities
/// do not depend on the circumference, so a capped or short-circuited
/// escalation simply leaves the cone records to fail honestly.
pub fn resolve_v(
    p: &HenonParams,
    frame: &JordanFrame,
    m_forward: Option<f64>,
    m_backward: Option<f64>,
) -> Result<u64> {
    if let Some(v) = p.v {
        return Ok(v);
    }

    // If even the large-v limit (coupling bound zero) cannot clear the
    // slack, no escalation helps; stay at the starting size and let the
    // verification report the failure there.
    let limit_margin = |b: DerivativeBounds<f64>, m: f64| -> Result<f64> {
        let limit = DerivativeBounds {
            mu: 0.0,
            m: 0.0,
            ..b
        };
        Ok(check_cone_conditions(&limit, m)?.margin)
    };
    if let Some(m) = m_forward {
        if limit_margin(assemble_forward_bounds(p, frame, V_START), m)? < V_SLACK {
            return Ok(V_START);
        }
    }
    if let Some(m) = m_backward {
        if limit_margin(assemble_backward_bounds(p, frame, V_START)?, m)? < V_SLACK {
            return Ok(V_START);
        }
    }

    let mut v = V_START;
    loop {
        let mut ok = true;
        if let Some(m) = m_forward {
            let b = assemble_forward_bounds(p, frame, v);
            ok &= check_cone_conditions(&b, m)?.margin >= V_SLACK;
        }
        if let Some(m) = m_backward {
            let b = assemble_backward_bounds(p, frame, v)?;
            ok &= check_cone_conditions(&b, m)?.margin >= V_SLACK;
        }
        if ok || v >= V_CAP {
            return Ok(v);
        }
        v *= 2;
    }
}

fn covering_records(
    tag_zero: &str,
    tag_exp: &str,
    tag_con: &str,
    triples: &[ChartTripleInput<f64>],
    verdict: &CoveringVerdict<f64>,
) -> Vec<InequalityRecord> {
    let mut u_excess = f64::NEG_INFINITY;
    let mut s_excess = f64::NEG_INFINITY;
    let mut base_margin = f64::INFINITY;
    let mut expansion = f64::INFINITY;
    let mut exp_threshold = f64::NEG_INFINITY;
    let mut exp_slack = f64::INFINITY;
    let mut exp_pass = true;
    let mut contraction = f64::NEG_INFINITY;
    let mut con_threshold = f64::INFINITY;
    let mut con_slack = f64::INFINITY;
    let mut con_pass = true;

    for (t, d) in triples.iter().zip(&verdict.diagnostics) {
        u_excess = u_excess.max(sub_up(d.zero_u_norm, t.eps_u));
        s_excess = s_excess.max(sub_up(d.zero_s_norm, t.eps_s));
        base_margin = base_margin
            .min(sub_down(t.zero_image.base.lo(), t.target_window.lo()))
            .min(sub_down(t.target_window.hi(), t.zero_image.base.hi()));

        let exp_thr = add_up(1.0, t.eps_u);
        expansion = expansion.min(d.expansion_lower);
        exp_threshold = exp_threshold.max(exp_thr);
        exp_slack = exp_slack.min(sub_down(d.expansion_lower, exp_thr));
        exp_pass &= d.expansion_ok;

        let con_thr = sub_down(1.0, t.eps_s);
        contraction = contraction.max(d.contraction_upper);
        con_threshold = con_threshold.min(con_thr);
        con_slack = con_slack.min(sub_down(con_thr, d.contraction_upper));
        con_pass &= d.contraction_ok;
    }

    // Pass flags come from the per-triple conjunction; the displayed
    // bound/threshold pair is the worst case on each side, which can be
    // more pessimistic than any single triple when thresholds vary.
    vec![
        InequalityRecord::new(format!("{tag_zero}-u"), u_excess, 0.0, Relation::LessEq),
        InequalityRecord::new(format!("{tag_zero}-s"), s_excess, 0.0, Relation::LessEq),
        InequalityRecord::new(
            format!("{tag_zero}-base"),
            base_margin,
            0.0,
            Relation::Greater,
        ),
        InequalityRecord {
            name: tag_exp.to_string(),
            bound: expansion,
            threshold: exp_threshold,
            relation: Relation::Greater,
            pass: exp_pass,
            slack: exp_slack,
        },
        InequalityRecord {
            name: tag_con.to_string(),
            bound: contraction,
            threshold: con_threshold,
            relation: Relation::Less,
            pass: con_pass,
            slack: con_slack,
        },
    ]
}

fn cone_records(tag: &str, verdict: &ConeVerdict<f64>) -> Vec<InequalityRecord> {
    vec![
        InequalityRecord::new(
            format!("{tag}-1"),
            verdict.lhs[0],
            verdict.m,
            Relation::Less,
        ),
        InequalityRecord::new(
            format!("{tag}-2"),
            verdict.lhs[1],
            verdict.m,
            Relation::Greater,
        ),
        InequalityRecord::new(
            format!("{tag}-3"),
            verdict.lhs[2],
            verdict.m,
            Relation::Less,
        ),
    ]
}

fn verify_direction(
    p: &HenonParams,
    m: f64,
    direction: MapDirection,
    threads: usize,
) -> Result<VerificationCertificate> {
    if m.is_nan() || m <= 1.0 {
        return Err(Error::InvalidRate(format!("{m}")));
    }
    let frame = eigen_data(p)?;
    let (mf, mb) = match direction {
        MapDirection::Forward => (Some(m), None),
        MapDirection::Backward => (None, Some(m)),
    };
    let v = resolve_v(p, &frame, mf, mb)?;
    let atlas = CircleAtlas::new(v)?;
    let triples = chart_triples(p, &frame, &atlas, direction)?;
    let covering = check_covering_parallel(&triples, threads)?;

    let mut cert = VerificationCertificate::new();
    cert.resolved_v = Some(v);
    match direction {
        MapDirection::Forward => {
            for r in covering_records(
                "zero-image",
                "cover-est-henon1",
                "cover-est-henon2",
                &triples,
                &covering,
            ) {
                cert.push(r);
            }
            let direct = forward_jac_enclosure(p, &frame, v);
            let printed = paper_forward_enclosure(p, &frame, v);
            cert.push(InequalityRecord::new(
                "der-encl-forw-n",
                direct.containment_excess(&printed),
                0.0,
                Relation::LessEq,
            ));
            let bounds = assemble_forward_bounds(p, &frame, v);
            let verdict = check_cone_conditions(&bounds, m)?;
            for r in cone_records("cone-est1-forward", &verdict) {
                cert.push(r);
            }
        }
        MapDirection::Backward => {
            for r in covering_records(
                "zero-image-inv",
                "cover-est-henon3",
                "cover-est-henon4",
                &triples,
                &covering,
            ) {
                cert.push(r);
            }
            let direct = backward_jac_enclosure(p, &frame, v)?;
            let printed = paper_backward_enclosure(p, &frame, v)?;
            cert.push(InequalityRecord::new(
                "der-encl-back",
                direct.containment_excess(&printed),
                0.0,
                Relation::LessEq,
            ));
            let bounds = assemble_backward_bounds(p, &frame, v)?;
            let verdict = check_cone_conditions(&bounds, m)?;
            for r in cone_records("cone-est1-backward", &verdict) {
                cert.push(r);
            }
        }
    }
    Ok(cert)
}

/// Certifies the forward covering and cone conditions at rate `m`.
pub fn verify_forward(p: &HenonParams, m: f64) -> Result<VerificationCertificate> {
    verify_direction(p, m, MapDirection::Forward, 1)
}

/// [`verify_forward`] with the chart triples spread over worker threads;
/// the certificate is identical regardless of the thread count.
pub fn verify_forward_threaded(
    p: &HenonParams,
    m: f64,
    threads: usize,
) -> Result<VerificationCertificate> {
    verify_direction(p, m, MapDirection::Forward, threads)
}

/// Certifies the backward covering and cone conditions at rate `m`, with
/// the unstable and stable roles reversed.
pub fn verify_backward(p: &HenonParams, m: f64) -> Result<VerificationCertificate> {
    verify_direction(p, m, MapDirection::Backward, 1)
}

/// [`verify_backward`] with a worker-thread count.
pub fn verify_backward_threaded(
    p: &HenonParams,
    m: f64,
    threads: usize,
) -> Result<VerificationCertificate> {
    verify_direction(p, m, MapDirection::Backward, threads)
}

/// The region estimate: the bundle set projects into
/// `(x_-, y_-) + [+- eps |kappa| (tau + eta)] x [+- eps |kappa| (tau |l2| + eta |l1|)]`,
/// which must fit inside the `1.1 eps` x `0.12 eps` box.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionVerdict {
    /// Enclosure of the x-extent of the invariant region around `x_-`.
    pub box_x: Iv,
    /// Enclosure of the y-extent around `y_-`.
    pub box_y: Iv,
    /// The target box x-extent.
    pub u_eps_x: Iv,
    /// The target box y-extent.
    pub u_eps_y: Iv,
    pub contained: bool,
    pub records: Vec<InequalityRecord>,
}

/// Checks `|D| subset U_eps`. Closed-box containment, so the degenerate
/// eps = 0 case (a point inside a point) passes.
pub fn region_bound(p: &HenonParams) -> Result<RegionVerdict> {
    let frame = eigen_data(p)?;
    let eps = Iv::point(p.epsilon);
    let kabs = frame.kappa.abs();
    let tau = Iv::point(p.tau);
    let eta = Iv::point(p.eta);

    let hw_x = (eps * kabs * (tau + eta)).hi();
    let hw_y = (eps * kabs * (tau * frame.lambda2.abs() + eta * frame.lambda1.abs())).hi();
    let thr_x = (Iv::point(11.0).try_div(Iv::point(10.0))? * eps).lo();
    let thr_y = (Iv::point(12.0).try_div(Iv::point(100.0))? * eps).lo();

    let records = vec![
        InequalityRecord::new("U-epsilon-x", hw_x, thr_x, Relation::LessEq),
        InequalityRecord::new("U-epsilon-y", hw_y, thr_y, Relation::LessEq),
    ];
    let contained = records.iter().all(|r| r.pass);

    Ok(RegionVerdict {
        box_x: frame.x_minus + Iv::symmetric(hw_x)?,
        box_y: frame.y_minus + Iv::symmetric(hw_y)?,
        u_eps_x: frame.x_minus
            + Iv::symmetric((Iv::point(11.0).try_div(Iv::point(10.0))? * eps).hi())?,
        u_eps_y: frame.y_minus
            + Iv::symmetric((Iv::point(12.0).try_div(Iv::point(100.0))? * eps).hi())?,
        contained,
        records,
    })
}

/// Existence record for the window pairing under the rigid base rotation:
/// a single chart window of length 9 must contain both the rotated
/// inscribed window and the cone-pair window of every possible image
/// cell. The margin is invariant under integer shifts of the cell, so one
/// representative cell decides all of them.
fn cone_pairing_record(name: &str, w: Iv) -> InequalityRecord {
    // Work relative to the integer part of the rotation.
    let base = w.lo().floor();
    let fl = w.lo() - base;
    let fh = w.hi() - base;

    // Image cells of theta' in [fl, 1 + fh].
    let i_lo = fl.floor() as i64;
    let i_hi = (1.0 + fh).floor() as i64;

    // Extent that must fit in one window: the rotated length-5 arc
    // starting at fl - 2 plus every [i' - 2, i' + 3].
    let mut lo_ext = fl - 2.0;
    let mut hi_ext = fh + 3.0;
    for i in i_lo..=i_hi {
        lo_ext = lo_ext.min(i as f64 - 2.0);
        hi_ext = hi_ext.max(i as f64 + 3.0);
    }

    let mut best = f64::NEG_INFINITY;
    let first = (hi_ext - 9.0).ceil() as i64;
    let last = lo_ext.floor() as i64;
    for i1 in first..=last {
        let m = (lo_ext - i1 as f64).min(i1 as f64 + 9.0 - hi_ext);
        best = best.max(m);
    }
    InequalityRecord::new(name, best, 0.0, Relation::Greater)
}

/// Runs the complete verification: atlas containment, window pairing,
/// forward and backward covering and cone conditions, and the region
/// bound, all at one commonly resolved atlas size.
pub fn full_verify(
    p: &HenonParams,
    m_forward: f64,
    m_backward: f64,
) -> Result<VerificationCertificate> {
    full_verify_threaded(p, m_forward, m_backward, 1)
}

/// [`full_verify`] with a worker-thread count for the covering checks.
pub fn full_verify_threaded(
    p: &HenonParams,
    m_forward: f64,
    m_backward: f64,
    threads: usize,
) -> Result<VerificationCertificate> {
    if m_forward.is_nan() || m_forward <= 1.0 {
        return Err(Error::InvalidRate(format!("{m_forward}")));
    }
    if m_backward.is_nan() || m_backward <= 1.0 {
        return Err(Error::InvalidRate(format!("{m_backward}")));
    }
    let frame = eigen_data(p)?;
    let v = resolve_v(p, &frame, Some(m_forward), Some(m_backward))?;
    let fixed = HenonParams { v: Some(v), ..*p };

    let mut cert = VerificationCertificate::new();
    cert.resolved_v = Some(v);

    let atlas = CircleAtlas::<f64>::new(v)?;
    let report = atlas.validate_cone_containment();
    cert.push(InequalityRecord::new(
        "atls-cond",
        report.enclosing_margin,
        0.0,
        Relation::Greater,
    ));
    cert.push(InequalityRecord::new(
        "atls-good-pair",
        report.chart_pair_margin,
        0.0,
        Relation::Greater,
    ));

    let w = Iv::point(v as f64) * Iv::point(p.omega);
    cert.push(cone_pairing_record("cone-pairing-forward", w));
    cert.push(cone_pairing_record("cone-pairing-backward", -w));

    cert.extend(verify_forward_threaded(&fixed, m_forward, threads)?);
    cert.extend(verify_backward_threaded(&fixed, m_backward, threads)?);
    cert.extend(VerificationCertificate {
        records: region_bound(&fixed)?.records,
        resolved_v: None,
        conclusion: None,
    });

    if cert.certified() {
        cert.conclusion = Some("invariant C0 manifold homeomorphic to T1 inside U_epsilon".into());
    }
    Ok(cert)
}

/// Result of the certified-epsilon bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonScan {
    /// Largest grid epsilon at which everything certifies.
    pub max_certified: f64,
    /// Bracket `(certified, failed)` of width at most 2^-20.
    pub bracket: (f64, f64),
}

/// Largest epsilon on a dyadic grid of resolution 2^-20 at which the
/// forward and backward verifications and the region bound all certify.
/// Every verified bound is monotone nondecreasing in epsilon, so the
/// certified set is an interval and bisection is exact on the grid.
pub fn max_certified_epsilon(
    p: &HenonParams,
    m_forward: f64,
    m_backward: f64,
) -> Result<EpsilonScan> {
    let certify = |eps: f64| -> Result<bool> {
        let q = p.with_epsilon(eps)?;
        if !verify_forward(&q, m_forward)?.certified() {
            return Ok(false);
        }
        if !verify_backward(&q, m_backward)?.certified() {
            return Ok(false);
        }
        Ok(region_bound(&q)?.contained)
    };

    if !certify(0.0)? {
        return Err(Error::ScanInconsistent);
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while certify(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1048576.0 {
            // Everything certifies far beyond any meaningful range.
            return Ok(EpsilonScan {
                max_certified: lo,
                bracket: (lo, hi),
            });
        }
    }
    while hi - lo > SCAN_RESOLUTION {
        let mid = lo + (hi - lo) / 2.0;
        if certify(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(EpsilonScan {
        max_certified: lo,
        bracket: (lo, hi),
    })
}

/// The rotating Henon map as a plain point map (test oracle surface).
pub fn rotating_henon_map(p: &HenonParams, z: (f64, f64, f64)) -> (f64, f64, f64) {
    let (theta, x, y) = z;
    (
        (theta + p.omega).rem_euclid(1.0),
        1.0 + y - p.a * x * x + p.epsilon * (2.0 * std::f64::consts::PI * theta).cos(),
        p.b * x,
    )
}

/// The inverse map as a plain point map.
pub fn rotating_henon_inverse(p: &HenonParams, z: (f64, f64, f64)) -> (f64, f64, f64) {
    let (theta, x, y) = z;
    let prev_theta = (theta - p.omega).rem_euclid(1.0);
    (
        prev_theta,
        y / p.b,
        x - 1.0 + p.a / (p.b * p.b) * y * y
            - p.epsilon * (2.0 * std::f64::consts::PI * prev_theta).cos(),
    )
}
