//! Truncated Taylor series ("jets") for exact low-order derivatives of
//! composed closed-form expressions.
//!
//! A `Jet<N>` stores the Taylor coefficients `c_k = f^(k)(t0) / k!` for
//! `k < N`. Arithmetic is truncated at order `N - 1`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize>(pub [f64; N]);

impl<const N: usize> Jet<N> {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Self(c)
    }

    /// Independent variable at `t0`: `t0 + 1·dt`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = t0;
        if N > 1 {
            c[1] = 1.0;
        }
        Self(c)
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.0[k] * fact
    }

    /// Jet of the derivative; the top coefficient becomes unknown and is
    /// set to zero, so the result is trustworthy to order `N - 2`.
    pub fn deriv(&self) -> Self {
        let mut c = [0.0; N];
        for k in 0..N - 1 {
            c[k] = (k + 1) as f64 * self.0[k + 1];
        }
        Self(c)
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x *= s);
        Self(c)
    }

    pub fn powi2(self) -> Self {
        self * self
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Self(c)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        let mut c = self.0;
        c[0] += rhs;
        Self(c)
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Sub<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn sub(self, rhs: Jet<N>) -> Jet<N> {
        -rhs + self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [0.0; N];
        for i in 0..N {
            for j in 0..N - i {
                c[i + j] += self.0[i] * rhs.0[j];
            }
        }
        Self(c)
    }
}

impl<const N: usize> Mul<Jet<N>> for f64 {
    type Output = Jet<N>;
    fn mul(self, rhs: Jet<N>) -> Jet<N> {
        rhs.scale(self)
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d0 = rhs.0[0];
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= rhs.0[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Self(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_derivatives_match_closed_form() {
        // f(t) = (1 + t^2) / (2 + t) at t = 0.7
        let t = Jet::<4>::variable(0.7);
        let f = (t * t + 1.0) / (t + 2.0);
        let d = 2.7_f64;
        let exact0 = 1.49 / d;
        let exact1 = (2.0 * 0.7 * d - 1.49) / (d * d);
        // f = t - 2 + 5/(t+2) => f'' = 10/(t+2)^3, f''' = -30/(t+2)^4
        assert!((f.value() - exact0).abs() < 1e-15);
        assert!((f.derivative(1) - exact1).abs() < 1e-14);
        assert!((f.derivative(2) - 10.0 / d.powi(3)).abs() < 1e-14);
        assert!((f.derivative(3) + 30.0 / d.powi(4)).abs() < 1e-13);
    }

    #[test]
    fn deriv_shifts_orders() {
        let t = Jet::<4>::variable(1.5);
        let f = t * t * t;
        let df = f.deriv();
        assert!((df.value() - 3.0 * 2.25).abs() < 1e-14);
        assert!((df.derivative(1) - 6.0 * 1.5).abs() < 1e-14);
    }
}
