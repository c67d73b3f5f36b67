//! Sparse multivariate polynomials over a field.
//!
//! Only what the symbolic Pfaffian test needs: ring arithmetic and
//! evaluation. Exponent vectors are kept dense (one slot per variable).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, T>,
}

impl<T: Field> Poly<T> {
    pub fn zero_in(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Poly::zero_in(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exp = vec![0u16; nvars];
        exp[i] = 1;
        let mut p = Poly::zero_in(nvars);
        p.add_term(exp, T::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exp: Vec<u16>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
        }
    }

    fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&p| p == 0))
    }

    /// Re-embeds a constant polynomial into a ring with `nvars` variables.
    /// Non-constant inputs cannot change ambient ring.
    fn lift_to(self, nvars: usize) -> Self {
        if self.nvars == nvars {
            return self;
        }
        assert!(self.is_constant(), "variable-count mismatch");
        let mut out = Poly::zero_in(nvars);
        for (_, c) in self.terms {
            out.add_term(vec![0; nvars], c);
        }
        out
    }

    fn common_nvars(a: &Self, b: &Self) -> usize {
        if a.nvars == b.nvars {
            a.nvars
        } else if a.is_constant() {
            b.nvars
        } else {
            a.nvars
        }
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars);
        let mut acc = T::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exp) {
                for _ in 0..e {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }
}

impl<T: Field> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        let nv = Poly::common_nvars(&self, &rhs);
        let mut out = self.lift_to(nv);
        for (e, c) in rhs.lift_to(nv).terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<T: Field> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        self + (-rhs)
    }
}

impl<T: Field> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(mut self) -> Poly<T> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<T: Field> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        let nv = Poly::common_nvars(&self, &rhs);
        let lhs = self.lift_to(nv);
        let rhs = rhs.lift_to(nv);
        let mut out = Poly::zero_in(nv);
        for (ea, ca) in &lhs.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca.clone() * cb.clone());
            }
        }
        out
    }
}

// `Zero`/`One` need a fixed variable count; polynomials created through them
// live in the one-variable ring, which is enough for the Ring blanket impl.
// Ambient-aware code always goes through `zero_in`/`constant`.
impl<T: Field> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero_in(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Field> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(1, T::one())
    }
}

impl<T: Field + fmt::Display> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| {
                        if p == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{p}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})·{}", vars.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
