use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::linalg::Rat;

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c as i128))
                .collect(),
        )
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> UniPoly {
        UniPoly::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> UniPoly {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = Rat::one();
        UniPoly { coeffs: c }
    }

    /// `x - a`.
    pub fn linear_root(a: Rat) -> UniPoly {
        UniPoly::new(vec![-a, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).copied().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rat {
        self.eval(Rat::from_integer(x as i128))
    }

    pub fn scale(&self, s: Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: usize) -> UniPoly {
        let mut out = UniPoly::constant(Rat::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
        let mut out = UniPoly::zero();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::constant(Rat::one());
            let mut denom = Rat::one();
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = &basis * &UniPoly::linear_root(xj);
                    denom *= xi - xj;
                }
            }
            out = &out + &basis.scale(yi / denom);
        }
        out
    }

    /// Integer coefficients, if all coefficients are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer() as i64))
            .collect()
    }

    /// Formats with the given variable name, highest degree first.
    pub fn format_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { "-" } else { "+" });
            }
            let unit = a.is_one() && i > 0;
            if !unit {
                s.push_str(&a.to_string());
                if i > 0 {
                    s.push('*');
                }
            }
            match i {
                0 => {}
                1 => s.push_str(var),
                _ => s.push_str(&format!("{var}^{i}")),
            }
        }
        s
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_in("k"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::rat;

    #[test]
    fn interpolation_recovers_quadratic() {
        let p = UniPoly::from_ints(&[1, 2, 3]);
        let pts: Vec<(Rat, Rat)> = (0..3).map(|k| (rat(k), p.eval_int(k))).collect();
        assert_eq!(UniPoly::interpolate(&pts), p);
        assert_eq!(p.to_string(), "3*k^2+2*k+1");
    }

    #[test]
    fn arithmetic() {
        let a = UniPoly::from_ints(&[1, 1]);
        assert_eq!(&a * &a, UniPoly::from_ints(&[1, 2, 1]));
        assert_eq!(&a - &a, UniPoly::zero());
        assert_eq!(a.pow(3).eval_int(1), rat(8));
        assert_eq!(UniPoly::from_ints(&[0, -1]).to_string(), "-k");
    }
}
