//! The circle atlas: windows `V_j` and `U_i` on `R/v`, chart maps, the
//! cone-pair lookup, and the containment validation that makes the window
//! pairs legitimate cone enclosing and cones chart pairs.
//!
//! Windows are open arcs `V_j = j + (0, 5) mod v` and
//! `U_i = i + (0, 9) mod v` for integer indices taken mod `v`; the index
//! set `{0, ..., v}` of the construction double-counts the wrap window,
//! which collapses harmlessly under the mod-v classes used here. Chart
//! maps `eta_i(i + x mod v) = i + x` are isometries onto `(i, i + 9)`.
//!
//! With unit quadratic forms the theta-shadow of a unit cone attached at
//! a point has radius exactly 1 (`gamma(dtheta) < alpha(dx) <= 1`), and
//! all windows have integer offsets, so containment is piecewise constant
//! between quarter-integer grid points; sampling at step 1/4 plus the
//! endpoints is exhaustive.

use crate::error::{Error, Result};
use crate::scalar::IntervalScalar;

/// Length of the inscribed windows `V_j`.
const V_LEN: f64 = 5.0;
/// Length of the chart windows `U_i`.
const U_LEN: f64 = 9.0;
/// Radius of the theta-shadow of a unit cone under unit quadratic forms.
const SHADOW: f64 = 1.0;

/// An open arc `start + (0, len)` on the circle `R/v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<T> {
    pub start: T,
    pub len: T,
}

/// The chart map of one window: `eta_i(i + x mod v) = i + x` on `U_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartMap<T> {
    index: u64,
    circumference: T,
    len: T,
}

impl<T: IntervalScalar> ChartMap<T> {
    /// Applies `eta_i`; the point must lie in `U_i`.
    pub fn forward(&self, theta: T) -> Result<T> {
        let i = T::from(self.index).unwrap();
        let d = modv(theta - i, self.circumference);
        if d <= T::zero() || d >= self.len {
            return Err(Error::OutsideWindow {
                point: format!("{theta}"),
                window: format!("U_{}", self.index),
            });
        }
        Ok(i + d)
    }

    /// Inverse chart map back to the circle.
    pub fn inverse(&self, x: T) -> T {
        modv(x, self.circumference)
    }
}

/// The window pair assigned to a base point by the cell rule: a point in
/// cell `[i, i + 1]` gets `(V_{i-2}, U_{i-4})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConePairing {
    pub v_index: u64,
    pub u_index: u64,
}

/// Outcome of the containment validation, with the worst margins seen.
/// `ok` iff both margins are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeContainmentReport<T> {
    pub ok: bool,
    /// Distance of the worst cone shadow to the enclosing window edge.
    pub enclosing_margin: T,
    /// Distance of the worst shadow-in-subwindow placement to failure.
    pub chart_pair_margin: T,
}

/// The good atlas on the circle `R/v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAtlas<T> {
    v: u64,
    v_len: T,
    u_len: T,
}

fn modv<T: IntervalScalar>(x: T, v: T) -> T {
    let mut r = x - (x / v).floor() * v;
    if r >= v {
        r = r - v;
    }
    if r < T::zero() {
        r = r + v;
    }
    r
}

impl<T: IntervalScalar> CircleAtlas<T> {
    /// Builds the standard atlas on `R/v`; requires `v >= 9` so the
    /// window lengths fit the circle.
    pub fn new(v: u64) -> Result<Self> {
        Self::with_window_lengths(v, T::from(V_LEN).unwrap(), T::from(U_LEN).unwrap())
    }

    /// Builds an atlas with custom window lengths. Intended for probing
    /// the containment validator with deliberately broken geometry; the
    /// standard lengths are 5 and 9.
    pub fn with_window_lengths(v: u64, v_len: T, u_len: T) -> Result<Self> {
        if v < 9 {
            return Err(Error::AtlasTooSmall(v));
        }
        Ok(Self { v, v_len, u_len })
    }

    /// Number of windows of each kind (indices are taken mod this).
    pub fn v(&self) -> u64 {
        self.v
    }

    /// Circumference of the base circle as a scalar.
    pub fn circumference(&self) -> T {
        T::from(self.v).unwrap()
    }

    pub fn v_window(&self, j: u64) -> Window<T> {
        Window {
            start: T::from(j % self.v).unwrap(),
            len: self.v_len,
        }
    }

    pub fn u_window(&self, i: u64) -> Window<T> {
        Window {
            start: T::from(i % self.v).unwrap(),
            len: self.u_len,
        }
    }

    pub fn chart(&self, i: u64) -> ChartMap<T> {
        ChartMap {
            index: i % self.v,
            circumference: self.circumference(),
            len: self.u_len,
        }
    }

    /// Open-arc membership on the circle.
    pub fn arc_contains(&self, w: Window<T>, theta: T) -> bool {
        let d = modv(theta - w.start, self.circumference());
        d > T::zero() && d < w.len
    }

    /// Containment of a closed arc `[a, b]` (with `b - a < len`) in the
    /// open arc `w`.
    pub fn arc_contains_closed(&self, w: Window<T>, a: T, b: T) -> bool {
        let d = modv(a - w.start, self.circumference());
        d > T::zero() && d + (b - a) < w.len
    }

    /// Signed margin of the closed arc `[a, b]` inside `w`: the smaller of
    /// the two gap widths, negative when the arc pokes out.
    fn arc_margin(&self, w: Window<T>, a: T, b: T) -> T {
        let d = modv(a - w.start, self.circumference());
        d.min(w.len - (d + (b - a)))
    }

    /// Open-arc-in-open-arc containment; shared endpoints are admissible.
    fn open_arc_in_open_arc(&self, inner: Window<T>, outer: Window<T>) -> bool {
        let d = modv(inner.start - outer.start, self.circumference());
        d + inner.len <= outer.len
    }

    pub fn v_contains(&self, j: u64, theta: T) -> bool {
        self.arc_contains(self.v_window(j), theta)
    }

    pub fn u_contains(&self, i: u64, theta: T) -> bool {
        self.arc_contains(self.u_window(i), theta)
    }

    /// The cone enclosing / cones chart pair for a base point:
    /// `(V_{i-2}, U_{i-4})` with `i = floor(theta) mod v`.
    pub fn cone_pair_for(&self, theta: T) -> ConePairing {
        let t = modv(theta, self.circumference());
        let i = t.floor().to_u64().unwrap_or(0) % self.v;
        ConePairing {
            v_index: (i + self.v - 2) % self.v,
            u_index: (i + self.v - 4) % self.v,
        }
    }

    /// Transition `eta_{i_to} o eta_{i_from}^{-1}` on overlaps. The point
    /// must land inside `U_{i_to}`; the result differs from `x` by a
    /// multiple of `v`.
    pub fn transition(&self, i_from: u64, i_to: u64, x: T) -> Result<T> {
        let _ = i_from;
        let theta = modv(x, self.circumference());
        self.chart(i_to).forward(theta)
    }

    /// Validates the two containment conditions behind the cone pairing,
    /// sampling base points on a quarter-step grid plus endpoints.
    ///
    /// 1. For each cell `[i, i+1]` and each sampled `theta_q` inside it,
    ///    the closed shadow `[theta_q - 1, theta_q + 1]` lies in the open
    ///    window `V_{i-2}` (which itself lies in `U_{i-4}`).
    /// 2. For each window `V_j` (paired chart `U_{j-2}`) and each sampled
    ///    `theta_q` in its closure, some window `V_l` inside `U_{j-2}`
    ///    contains the shadow.
    pub fn validate_cone_containment(&self) -> ConeContainmentReport<T> {
        let quarter = T::from(0.25).unwrap();
        let shadow = T::from(SHADOW).unwrap();
        let mut enclosing_margin = T::infinity();
        let mut chart_pair_margin = T::infinity();

        // All windows are integer translates of one another, so the
        // margins repeat with period 1 in the cell index; checking a
        // bounded prefix of a large circle is exhaustive.
        let span = self.v.min(256);

        for cell in 0..span {
            let pair = self.cone_pair_for(T::from(cell).unwrap() + quarter);
            let vwin = self.v_window(pair.v_index);
            let uwin = self.u_window(pair.u_index);
            // V of the pair must itself sit inside U of the pair.
            let vm = self.arc_margin(uwin, vwin.start, vwin.start + vwin.len);
            enclosing_margin = enclosing_margin.min(vm);

            let base = T::from(cell).unwrap();
            let mut k = 0u32;
            loop {
                let theta_q = base + quarter * T::from(k).unwrap();
                let m = self.arc_margin(vwin, theta_q - shadow, theta_q + shadow);
                enclosing_margin = enclosing_margin.min(m);
                if k == 4 {
                    break;
                }
                k += 1;
            }
        }

        for j in 0..span {
            let paired_u = self.u_window((j + self.v - 2) % self.v);
            let base = T::from(j).unwrap();
            // Closure of V_j sampled at quarter steps.
            let steps = (self.v_len / quarter).ceil().to_u32().unwrap_or(20);
            for k in 0..=steps {
                let theta_q = base + (quarter * T::from(k).unwrap()).min(self.v_len);
                let mut best = T::neg_infinity();
                // Candidate subwindows V_l inside the paired U; with
                // integer offsets only l in {j-2, ..., j+2} can qualify.
                for d in 0..5u64 {
                    let l = (j + self.v - 2 + d) % self.v;
                    let vl = self.v_window(l);
                    if !self.open_arc_in_open_arc(vl, paired_u) {
                        continue;
                    }
                    let m = self.arc_margin(vl, theta_q - shadow, theta_q + shadow);
                    best = best.max(m);
                }
                chart_pair_margin = chart_pair_margin.min(best);
            }
        }

        ConeContainmentReport {
            ok: enclosing_margin > T::zero() && chart_pair_margin > T::zero(),
            enclosing_margin,
            chart_pair_margin,
        }
    }
}
