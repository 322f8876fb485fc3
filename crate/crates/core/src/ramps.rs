//! Interaction schedules `g(t)` on `[0, t_f]` and the quintic switching
//! function used by the variational shortcut.

use std::f64::consts::PI;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::jet::Jet;
use crate::sta::StaPulse;

/// Coefficients of `eta(s) = 10 s^3 - 15 s^4 + 6 s^5` in `s = t / t_f`.
const QUINTIC: [f64; 6] = [0.0, 0.0, 0.0, 10.0, -15.0, 6.0];

fn check_time(t: f64, t_f: f64) -> Result<f64> {
    let slack = 1e-12 * t_f;
    if !(t >= -slack && t <= t_f + slack) {
        return Err(Error::TimeOutOfRange { t, t_f });
    }
    Ok(t.clamp(0.0, t_f))
}

fn check_duration(t_f: f64) -> Result<()> {
    if !(t_f > 0.0 && t_f.is_finite()) {
        return Err(Error::InvalidArgument(format!("ramp duration must be positive and finite, got {t_f}")));
    }
    Ok(())
}

/// Quintic `eta(t)` with `eta(0) = 0`, `eta(t_f) = 1` and vanishing first and
/// second derivatives at both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchingFunction {
    t_f: f64,
}

impl SwitchingFunction {
    pub fn new(t_f: f64) -> Result<Self> {
        check_duration(t_f)?;
        Ok(Self { t_f })
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    /// Polynomial coefficients `a_j` of `eta(t) = sum_j a_j t^j`.
    pub fn coefficients(&self) -> [f64; 6] {
        let mut a = QUINTIC;
        for (j, c) in a.iter_mut().enumerate() {
            *c /= self.t_f.powi(j as i32);
        }
        a
    }

    pub fn eta(&self, t: f64) -> Result<f64> {
        let s = check_time(t, self.t_f)? / self.t_f;
        Ok(s * s * s * (10.0 - 15.0 * s + 6.0 * s * s))
    }

    pub fn eta_dot(&self, t: f64) -> Result<f64> {
        let s = check_time(t, self.t_f)? / self.t_f;
        Ok(30.0 * s * s * (1.0 - s) * (1.0 - s) / self.t_f)
    }

    pub fn eta_ddot(&self, t: f64) -> Result<f64> {
        let s = check_time(t, self.t_f)? / self.t_f;
        Ok(60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (self.t_f * self.t_f))
    }

    /// Taylor jet of `eta` in `t` about `t`.
    pub fn jet<const N: usize>(&self, t: f64) -> Result<Jet<N>> {
        let t = check_time(t, self.t_f)?;
        let s = Jet::<N>::variable(t).scale(1.0 / self.t_f);
        Ok(s * s * s * (10.0 - 15.0 * s + (s * s).scale(6.0)))
    }
}

/// Normalized sinusoidal profile rising from 0 to 1 with vanishing first and
/// second derivatives at both ends; returns the value and two derivatives in `s`.
fn sinusoidal_profile(s: f64) -> (f64, f64, f64) {
    let w = 0.5 * PI;
    let (s1, s3, s5) = ((w * s).sin(), (3.0 * w * s).sin(), (5.0 * w * s).sin());
    let (c1, c3, c5) = ((w * s).cos(), (3.0 * w * s).cos(), (5.0 * w * s).cos());
    let v = (30.0 * s1 - 5.0 * s3 - 3.0 * s5) / 32.0;
    let d = w * (30.0 * c1 - 15.0 * c3 - 15.0 * c5) / 32.0;
    let dd = -w * w * (30.0 * s1 - 45.0 * s3 - 75.0 * s5) / 32.0;
    (v, d, dd)
}

/// Reference sinusoidal ramp from 0 to `g_f`.
pub fn g_reference(t: f64, g_f: f64, t_f: f64) -> Result<f64> {
    check_duration(t_f)?;
    Ok(g_f * sinusoidal_profile(check_time(t, t_f)? / t_f).0)
}

/// Affine ramp from `g_i` to `g_f`.
pub fn g_linear(t: f64, g_i: f64, g_f: f64, t_f: f64) -> Result<f64> {
    check_duration(t_f)?;
    Ok(g_i + (g_f - g_i) * check_time(t, t_f)? / t_f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RampKind {
    Reference,
    Linear,
    Constant,
    Sta,
    StaTg,
    Tabulated,
}

impl RampKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RampKind::Reference => "reference",
            RampKind::Linear => "linear",
            RampKind::Constant => "constant",
            RampKind::Sta => "sta",
            RampKind::StaTg => "sta-tg",
            RampKind::Tabulated => "tabulated",
        }
    }
}

impl std::fmt::Display for RampKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RampKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "reference" => RampKind::Reference,
            "linear" => RampKind::Linear,
            "constant" => RampKind::Constant,
            "sta" => RampKind::Sta,
            "sta-tg" => RampKind::StaTg,
            "tabulated" => RampKind::Tabulated,
            other => return Err(Error::Config(format!("unknown ramp kind `{other}`"))),
        })
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Analytic,
    Sta(Box<StaPulse>),
    Tabulated(MonotoneCubic),
}

/// Interaction schedule with analytic first and second derivatives.
#[derive(Clone, Debug)]
pub struct Ramp {
    kind: RampKind,
    g_i: f64,
    g_f: f64,
    t_f: f64,
    shape: Shape,
}

impl Ramp {
    /// Sinusoidal ramp `g_i + (g_f - g_i) R(t / t_f)`.
    pub fn reference(g_i: f64, g_f: f64, t_f: f64) -> Result<Self> {
        check_duration(t_f)?;
        Ok(Self { kind: RampKind::Reference, g_i, g_f, t_f, shape: Shape::Analytic })
    }

    pub fn linear(g_i: f64, g_f: f64, t_f: f64) -> Result<Self> {
        check_duration(t_f)?;
        Ok(Self { kind: RampKind::Linear, g_i, g_f, t_f, shape: Shape::Analytic })
    }

    pub fn constant(g: f64, t_f: f64) -> Result<Self> {
        check_duration(t_f)?;
        Ok(Self { kind: RampKind::Constant, g_i: g, g_f: g, t_f, shape: Shape::Analytic })
    }

    /// Ramp following a shortcut pulse; evaluated in closed form at any time.
    pub fn from_sta(pulse: StaPulse) -> Self {
        let kind = if pulse.kernels().g_f.is_infinite() { RampKind::StaTg } else { RampKind::Sta };
        Self {
            kind,
            g_i: pulse.kernels().g_i,
            g_f: pulse.kernels().g_f,
            t_f: pulse.t_f(),
            shape: Shape::Sta(Box::new(pulse)),
        }
    }

    /// Monotone cubic interpolation through `(t, g)` samples starting at `t = 0`.
    pub fn tabulated(ts: Vec<f64>, gs: Vec<f64>) -> Result<Self> {
        if ts.first() != Some(&0.0) {
            return Err(Error::InvalidArgument("tabulated ramp must start at t = 0".into()));
        }
        let t_f = *ts.last().unwrap();
        check_duration(t_f)?;
        let (g_i, g_f) = (gs[0], *gs.last().unwrap());
        let interp = MonotoneCubic::new(ts, gs)?;
        Ok(Self { kind: RampKind::Tabulated, g_i, g_f, t_f, shape: Shape::Tabulated(interp) })
    }

    pub fn kind(&self) -> RampKind {
        self.kind
    }

    pub fn g_i(&self) -> f64 {
        self.g_i
    }

    pub fn g_f(&self) -> f64 {
        self.g_f
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn sta_pulse(&self) -> Option<&StaPulse> {
        match &self.shape {
            Shape::Sta(p) => Some(p),
            _ => None,
        }
    }

    /// `(g, g_dot, g_ddot)` at time `t`.
    pub fn derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        let t = check_time(t, self.t_f)?;
        let dg = self.g_f - self.g_i;
        match &self.shape {
            Shape::Sta(p) => p.g_derivatives(t),
            Shape::Tabulated(m) => Ok(m.eval(t)),
            Shape::Analytic => Ok(match self.kind {
                RampKind::Reference => {
                    let (v, d, dd) = sinusoidal_profile(t / self.t_f);
                    (self.g_i + dg * v, dg * d / self.t_f, dg * dd / (self.t_f * self.t_f))
                }
                RampKind::Linear => (self.g_i + dg * t / self.t_f, dg / self.t_f, 0.0),
                _ => (self.g_i, 0.0, 0.0),
            }),
        }
    }

    pub fn g(&self, t: f64) -> Result<f64> {
        let t = check_time(t, self.t_f)?;
        match &self.shape {
            Shape::Sta(p) => p.g(t),
            _ => Ok(self.derivatives(t)?.0),
        }
    }

    pub fn g_dot(&self, t: f64) -> Result<f64> {
        Ok(self.derivatives(t)?.1)
    }

    pub fn g_ddot(&self, t: f64) -> Result<f64> {
        Ok(self.derivatives(t)?.2)
    }

    /// `n` uniform samples `(t, g)` including both endpoints.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let t = if k + 1 == n { self.t_f } else { self.t_f * k as f64 / (n - 1) as f64 };
                self.g(t).map(|g| (t, g))
            })
            .collect()
    }

    /// Resamples this ramp on `n` points into a tabulated ramp.
    pub fn resample(&self, n: usize) -> Result<Ramp> {
        let (ts, gs) = self.sample(n)?.into_iter().unzip();
        Ramp::tabulated(ts, gs)
    }
}

/// Writes `(t, g)` rows with header `t,g`.
pub fn write_ramp_csv<W: Write>(w: W, rows: &[(f64, f64)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "g"])?;
    for (t, g) in rows {
        out.write_record([t.to_string(), g.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a `t,g` table into a tabulated ramp.
pub fn read_ramp_csv<R: Read>(r: R) -> Result<Ramp> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "g"] {
        return Err(Error::Config(format!("ramp table header must be `t,g`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut ts = Vec::new();
    let mut gs = Vec::new();
    for rec in rdr.deserialize() {
        let (t, g): (f64, f64) = rec?;
        ts.push(t);
        gs.push(g);
    }
    Ramp::tabulated(ts, gs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{SMatrix, SVector};

    #[test]
    fn switching_function_examples() {
        let sf = SwitchingFunction::new(4.0).unwrap();
        assert_eq!(sf.eta(0.0).unwrap(), 0.0);
        assert_eq!(sf.eta(4.0).unwrap(), 1.0);
        assert_eq!(sf.eta(2.0).unwrap(), 0.5);
        assert!((sf.eta_dot(2.0).unwrap() - 15.0 / (8.0 * 4.0)).abs() < 1e-15);
        for t in [0.0, 4.0] {
            assert_eq!(sf.eta_dot(t).unwrap(), 0.0);
            assert_eq!(sf.eta_ddot(t).unwrap(), 0.0);
        }
        assert!(matches!(sf.eta(4.5), Err(Error::TimeOutOfRange { .. })));
        assert!(SwitchingFunction::new(0.0).is_err());
    }

    #[test]
    fn coefficients_match_boundary_value_solve() {
        // solve the six boundary conditions directly
        for t_f in [0.5f64, 2.0, 10.0] {
            let mut m = SMatrix::<f64, 6, 6>::zeros();
            for j in 0..6 {
                let jf = j as f64;
                m[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
                m[(1, j)] = t_f.powi(j as i32);
                m[(2, j)] = if j == 1 { 1.0 } else { 0.0 };
                m[(3, j)] = if j >= 1 { jf * t_f.powi(j as i32 - 1) } else { 0.0 };
                m[(4, j)] = if j == 2 { 2.0 } else { 0.0 };
                m[(5, j)] = if j >= 2 { jf * (jf - 1.0) * t_f.powi(j as i32 - 2) } else { 0.0 };
            }
            let rhs = SVector::<f64, 6>::from([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
            let sol = m.lu().solve(&rhs).unwrap();
            let a = SwitchingFunction::new(t_f).unwrap().coefficients();
            for j in 0..6 {
                assert!((a[j] - sol[j]).abs() < 1e-12 * (1.0 + sol[j].abs()), "t_f = {t_f}, j = {j}");
            }
            let residual = m * SVector::<f64, 6>::from(a) - rhs;
            assert!(residual.amax() < 1e-12);
        }
    }

    #[test]
    fn switching_function_is_increasing() {
        let sf = SwitchingFunction::new(3.0).unwrap();
        let mut prev = 0.0;
        for k in 1..1000 {
            let e = sf.eta(3.0 * k as f64 / 1000.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn jet_matches_closed_form_derivatives() {
        let sf = SwitchingFunction::new(2.5).unwrap();
        for t in [0.0, 0.7, 1.25, 2.5] {
            let j = sf.jet::<4>(t).unwrap();
            assert!((j.value() - sf.eta(t).unwrap()).abs() < 1e-15);
            assert!((j.derivative(1) - sf.eta_dot(t).unwrap()).abs() < 1e-13);
            assert!((j.derivative(2) - sf.eta_ddot(t).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn reference_ramp_examples() {
        let r = Ramp::reference(0.0, 20.0, 10.0).unwrap();
        assert_eq!(r.g(0.0).unwrap(), 0.0);
        assert!((r.g(10.0).unwrap() - 20.0).abs() < 1e-13);
        let want = 20.0 / 32.0 * std::f64::consts::FRAC_1_SQRT_2 * 28.0;
        assert!((r.g(5.0).unwrap() - want).abs() < 1e-12);
        assert!((r.g(5.0).unwrap() - 12.3744).abs() < 1e-4);
        for t in [0.0, 10.0] {
            assert!(r.g_dot(t).unwrap().abs() < 1e-12);
            assert!(r.g_ddot(t).unwrap().abs() < 1e-12);
        }
        assert_eq!(g_reference(5.0, 20.0, 10.0).unwrap(), r.g(5.0).unwrap());
    }

    #[test]
    fn linear_ramp_examples() {
        let r = Ramp::linear(0.0, 20.0, 3.0).unwrap();
        assert_eq!(r.g(0.0).unwrap(), 0.0);
        assert_eq!(r.g(3.0).unwrap(), 20.0);
        assert_eq!(r.g(1.5).unwrap(), 10.0);
        assert_eq!(g_linear(1.5, 0.0, 20.0, 3.0).unwrap(), 10.0);
    }

    #[test]
    fn analytic_derivatives_match_central_differences() {
        let ramps = [
            Ramp::reference(1.0, 20.0, 7.0).unwrap(),
            Ramp::linear(-2.0, 5.0, 3.0).unwrap(),
            Ramp::constant(4.0, 1.0).unwrap(),
        ];
        for r in &ramps {
            let h = 1e-5 * r.t_f();
            for k in 1..10 {
                let t = r.t_f() * k as f64 / 10.0;
                let fd = (r.g(t + h).unwrap() - r.g(t - h).unwrap()) / (2.0 * h);
                assert!((fd - r.g_dot(t).unwrap()).abs() < 1e-6, "{}", r.kind());
                let fdd = (r.g_dot(t + h).unwrap() - r.g_dot(t - h).unwrap()) / (2.0 * h);
                assert!((fdd - r.g_ddot(t).unwrap()).abs() < 1e-5, "{}", r.kind());
            }
        }
    }

    #[test]
    fn tabulated_ramp_round_trips_through_csv() {
        let src = Ramp::reference(0.0, 20.0, 10.0).unwrap();
        let rows = src.sample(257).unwrap();
        let mut buf = Vec::new();
        write_ramp_csv(&mut buf, &rows).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("t,g\n0,0\n"));
        let tab = read_ramp_csv(buf.as_slice()).unwrap();
        assert_eq!(tab.kind(), RampKind::Tabulated);
        assert_eq!(tab.g(0.0).unwrap(), 0.0);
        assert!((tab.g(10.0).unwrap() - 20.0).abs() < 1e-12);
        assert!((tab.g(3.3).unwrap() - src.g(3.3).unwrap()).abs() < 1e-4);
        // derivative check away from knots
        let h = 1e-5 * tab.t_f();
        let t = 3.33;
        let fd = (tab.g(t + h).unwrap() - tab.g(t - h).unwrap()) / (2.0 * h);
        assert!((fd - tab.g_dot(t).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn ramp_kind_parses() {
        for k in [RampKind::Reference, RampKind::Linear, RampKind::Constant, RampKind::Sta, RampKind::StaTg, RampKind::Tabulated] {
            assert_eq!(k.as_str().parse::<RampKind>().unwrap(), k);
        }
        assert!("bogus".parse::<RampKind>().is_err());
    }
}
