//! Truncated bivariate Taylor polynomials.
//!
//! A [`Taylor`] carries the coefficients of a function of `(u, v)` around a
//! base point up to total degree three. Catalog parametrizations are written
//! once, generically over [`Scalar`], and evaluated either with plain `f64`
//! (values only) or with `Taylor` (exact derivatives up to third order).

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of monomials `u^i v^j` with `i + j <= 3`.
pub const NCOEF: usize = 10;

/// Exponents of each stored monomial, graded by total degree.
pub const MONOMIALS: [(u8, u8); NCOEF] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const fn index_of(i: u8, j: u8) -> usize {
    let d = (i + j) as usize;
    // first index of degree d is d(d+1)/2; within a degree, sorted by decreasing i
    d * (d + 1) / 2 + (d - i as usize)
}

const fn product_table() -> ([(u8, u8, u8); 35], usize) {
    let mut out = [(0u8, 0u8, 0u8); 35];
    let mut n = 0;
    let mut a = 0;
    while a < NCOEF {
        let mut b = 0;
        while b < NCOEF {
            let (ia, ja) = MONOMIALS[a];
            let (ib, jb) = MONOMIALS[b];
            if ia + ja + ib + jb <= 3 {
                out[n] = (a as u8, b as u8, index_of(ia + ib, ja + jb) as u8);
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    (out, n)
}

const PRODUCTS: ([(u8, u8, u8); 35], usize) = product_table();

fn degree(k: usize) -> u8 {
    let (i, j) = MONOMIALS[k];
    i + j
}

/// Scalar arithmetic shared by `f64` and [`Taylor`].
pub trait Scalar:
    Copy
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(x: f64) -> Self;
    fn val(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn val(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// Polynomial coefficients `c[k]` of `u^i v^j` (not derivatives), valid up to
/// total degree `order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor {
    pub c: [f64; NCOEF],
    pub order: u8,
}

impl Taylor {
    pub fn constant(x: f64) -> Self {
        let mut c = [0.0; NCOEF];
        c[0] = x;
        Taylor { c, order: 3 }
    }

    /// The coordinate `u` expanded around `u0`.
    pub fn var_u(u0: f64) -> Self {
        let mut t = Self::constant(u0);
        t.c[1] = 1.0;
        t
    }

    pub fn var_v(v0: f64) -> Self {
        let mut t = Self::constant(v0);
        t.c[2] = 1.0;
        t
    }

    fn truncated(mut self) -> Self {
        for k in 0..NCOEF {
            if degree(k) > self.order {
                self.c[k] = 0.0;
            }
        }
        self
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative `∂^{i+j} / ∂u^i ∂v^j` at the base point.
    pub fn deriv(&self, i: u8, j: u8) -> f64 {
        let k = index_of(i, j);
        let fact = |n: u8| (1..=n as u32).product::<u32>() as f64;
        self.c[k] * fact(i) * fact(j)
    }

    pub fn du(&self) -> Taylor {
        self.partial(true)
    }

    pub fn dv(&self) -> Taylor {
        self.partial(false)
    }

    fn partial(&self, along_u: bool) -> Taylor {
        let mut out = Taylor {
            c: [0.0; NCOEF],
            order: self.order.saturating_sub(1),
        };
        for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
            if degree(k) > self.order {
                continue;
            }
            if along_u && i > 0 {
                out.c[index_of(i - 1, j)] += i as f64 * self.c[k];
            } else if !along_u && j > 0 {
                out.c[index_of(i, j - 1)] += j as f64 * self.c[k];
            }
        }
        out.truncated()
    }

    /// Evaluates the polynomial at an offset `(du, dv)` from the base point.
    pub fn eval_offset(&self, du: f64, dv: f64) -> f64 {
        MONOMIALS
            .iter()
            .zip(self.c.iter())
            .map(|(&(i, j), c)| c * du.powi(i as i32) * dv.powi(j as i32))
            .sum()
    }

    /// `g(self)` from the univariate derivatives `g, g', g'', g'''` at the value.
    fn compose(self, g: [f64; 4]) -> Taylor {
        let mut h = self;
        h.c[0] = 0.0;
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = Taylor::constant(g[0]);
        out.order = self.order;
        for k in 1..NCOEF {
            out.c[k] = g[1] * h.c[k] + 0.5 * g[2] * h2.c[k] + g[3] / 6.0 * h3.c[k];
        }
        out.truncated()
    }
}

impl Add for Taylor {
    type Output = Taylor;
    fn add(self, o: Taylor) -> Taylor {
        let mut c = [0.0; NCOEF];
        for k in 0..NCOEF {
            c[k] = self.c[k] + o.c[k];
        }
        Taylor {
            c,
            order: self.order.min(o.order),
        }
        .truncated()
    }
}

impl Sub for Taylor {
    type Output = Taylor;
    fn sub(self, o: Taylor) -> Taylor {
        self + (-o)
    }
}

impl Neg for Taylor {
    type Output = Taylor;
    fn neg(mut self) -> Taylor {
        for c in self.c.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Taylor {
    type Output = Taylor;
    fn mul(self, o: Taylor) -> Taylor {
        let mut c = [0.0; NCOEF];
        let (table, n) = PRODUCTS;
        for &(a, b, r) in &table[..n] {
            c[r as usize] += self.c[a as usize] * o.c[b as usize];
        }
        Taylor {
            c,
            order: self.order.min(o.order),
        }
        .truncated()
    }
}

impl Div for Taylor {
    type Output = Taylor;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Taylor) -> Taylor {
        self * o.recip()
    }
}

impl Add<f64> for Taylor {
    type Output = Taylor;
    fn add(mut self, x: f64) -> Taylor {
        self.c[0] += x;
        self
    }
}

impl Sub<f64> for Taylor {
    type Output = Taylor;
    fn sub(mut self, x: f64) -> Taylor {
        self.c[0] -= x;
        self
    }
}

impl Mul<f64> for Taylor {
    type Output = Taylor;
    fn mul(mut self, x: f64) -> Taylor {
        for c in self.c.iter_mut() {
            *c *= x;
        }
        self
    }
}

impl Div<f64> for Taylor {
    type Output = Taylor;
    fn div(self, x: f64) -> Taylor {
        self * (1.0 / x)
    }
}

impl Scalar for Taylor {
    fn cst(x: f64) -> Self {
        Taylor::constant(x)
    }
    fn val(&self) -> f64 {
        self.c[0]
    }
    fn sin(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c])
    }
    fn cos(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s])
    }
    fn sqrt(self) -> Self {
        let x = self.c[0];
        let r = x.sqrt();
        self.compose([r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)])
    }
    fn exp(self) -> Self {
        let e = self.c[0].exp();
        self.compose([e, e, e, e])
    }
    fn recip(self) -> Self {
        let x = self.c[0];
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }
    fn powi(self, n: i32) -> Self {
        let x = self.c[0];
        let nf = n as f64;
        self.compose([
            x.powi(n),
            nf * x.powi(n - 1),
            nf * (nf - 1.0) * x.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * x.powi(n - 3),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn product_table_has_all_pairs() {
        assert_eq!(PRODUCTS.1, 35);
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        // f = u^2 v + 3 v^3 at (1, 2)
        let u = Taylor::var_u(1.0);
        let v = Taylor::var_v(2.0);
        let f = u * u * v + v * v * v * 3.0;
        assert!(close(f.value(), 2.0 + 24.0));
        assert!(close(f.deriv(1, 0), 4.0));
        assert!(close(f.deriv(0, 1), 1.0 + 36.0));
        assert!(close(f.deriv(2, 0), 4.0));
        assert!(close(f.deriv(1, 1), 2.0));
        assert!(close(f.deriv(0, 2), 36.0));
        assert!(close(f.deriv(2, 1), 2.0));
        assert!(close(f.deriv(0, 3), 18.0));
    }

    #[test]
    fn transcendental_chain_rule() {
        let (u0, v0) = (0.3, -0.7);
        let u = Taylor::var_u(u0);
        let v = Taylor::var_v(v0);
        let f = (u * v).sin() + (u * u + 2.0).sqrt() * v.exp() + (u + 3.0).recip();
        let g = |a: f64, b: f64| (a * b).sin() + (a * a + 2.0).sqrt() * b.exp() + 1.0 / (a + 3.0);
        let h = 1e-3;
        let fd_uv = (g(u0 + h, v0 + h) - g(u0 + h, v0 - h) - g(u0 - h, v0 + h)
            + g(u0 - h, v0 - h))
            / (4.0 * h * h);
        assert!((f.deriv(1, 1) - fd_uv).abs() < 1e-6);
        let fd_uuu = (g(u0 + 2.0 * h, v0) - 2.0 * g(u0 + h, v0) + 2.0 * g(u0 - h, v0)
            - g(u0 - 2.0 * h, v0))
            / (2.0 * h * h * h);
        assert!((f.deriv(3, 0) - fd_uuu).abs() < 1e-4);
    }

    #[test]
    fn partial_lowers_order() {
        let u = Taylor::var_u(0.5);
        let f = u.powi(4);
        let fu = f.du();
        assert_eq!(fu.order, 2);
        assert!(close(fu.value(), 4.0 * 0.125));
        assert!(close(fu.deriv(1, 0), 12.0 * 0.25));
        assert!(close(fu.deriv(2, 0), 24.0 * 0.5));
    }
}
