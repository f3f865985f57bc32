//! Minimal complex arithmetic for the order parameter.
//!
//! A hand-rolled type keeps the hot loops transparent and the float behavior
//! deterministic across platforms.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub const ZERO: Cx = Cx { re: 0.0, im: 0.0 };
    pub const ONE: Cx = Cx { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Cx {
        Cx { re, im }
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Cx {
        Cx::new(modulus * phase.cos(), modulus * phase.sin())
    }

    /// e^{i phase}
    pub fn unit(phase: f64) -> Cx {
        Cx::from_polar(1.0, phase)
    }

    pub fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.abs2().sqrt()
    }

    /// Principal argument in (-pi, pi].
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn conj(self) -> Cx {
        Cx::new(self.re, -self.im)
    }

    pub fn scale(self, f: f64) -> Cx {
        Cx::new(self.re * f, self.im * f)
    }

    /// Real scalar product (u, v) = Re(u conj(v)).
    pub fn dot(self, other: Cx) -> f64 {
        self.re * other.re + self.im * other.im
    }

    /// Wedge product u ^ v = (iu, v).
    pub fn wedge(self, other: Cx) -> f64 {
        self.re * other.im - self.im * other.re
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, rhs: Cx) -> Cx {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, rhs: Cx) -> Cx {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, rhs: Cx) -> Cx {
        Cx::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}

impl AddAssign for Cx {
    fn add_assign(&mut self, rhs: Cx) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for Cx {
    fn sub_assign(&mut self, rhs: Cx) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

/// Phase increment from `b` to `a` on the principal branch: arg(a * conj(b)).
pub fn principal_phase_step(a: Cx, b: Cx) -> f64 {
    (a * b.conj()).arg()
}
