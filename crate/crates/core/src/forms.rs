//! Sparse exterior algebra on an n-dimensional orthonormal coframe.
//!
//! A `KForm` is a sparse sum of wedge monomials e^{i₁…i_k} with strictly
//! increasing indices, coefficients in any [`Ring`]. Signs come from
//! inversion counting; nothing here touches floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::linalg::Matrix;
use crate::scalar::{Field, Ring, Scalar};

/// Strictly increasing tuple of coframe indices in 1..=n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    /// Builds a multi-index, checking strict monotonicity.
    pub fn new(indices: &[u8]) -> Result<Self, FormError> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(FormError::BadMultiIndex(indices.to_vec()));
            }
        }
        if indices.iter().any(|&i| i == 0) {
            return Err(FormError::BadMultiIndex(indices.to_vec()));
        }
        Ok(MultiIndex(indices.to_vec()))
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: u8) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// Merges two disjoint sorted index sets, returning (sign, merged);
    /// None if they share an index. Sign is the parity of the shuffle.
    fn merge(&self, other: &MultiIndex) -> Option<(i8, MultiIndex)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut inversions = 0usize;
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                // b[j] jumps over the remaining entries of a
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, MultiIndex(out)))
    }

    /// Complementary index set inside 1..=n and the sign of the permutation
    /// (self, complement) relative to (1, …, n).
    fn complement(&self, dim: u8) -> (i8, MultiIndex) {
        let comp: Vec<u8> = (1..=dim).filter(|i| !self.contains(*i)).collect();
        // parity of (self, comp): count pairs (s, c) with s > c
        let mut inversions = 0usize;
        for &s in &self.0 {
            inversions += comp.iter().take_while(|&&c| c < s).count();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        (sign, MultiIndex(comp))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.iter().all(|&i| i <= 9) {
            let digits: String = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "e{digits}")
        } else {
            let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "e{{{}}}", parts.join(" "))
        }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum FormError {
    DimensionMismatch { left: u8, right: u8 },
    BadMultiIndex(Vec<u8>),
    IndexOutOfRange { index: u8, dim: u8 },
    DegreeMismatch { expected: u8, found: u8 },
    SingularMatrix,
}

impl fmt::Display for FormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormError::DimensionMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {left} vs {right}")
            }
            FormError::BadMultiIndex(ix) => {
                write!(f, "multi-index {ix:?} is not strictly increasing and positive")
            }
            FormError::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} outside 1..={dim}")
            }
            FormError::DegreeMismatch { expected, found } => {
                write!(f, "expected a form of degree {expected}, found degree {found}")
            }
            FormError::SingularMatrix => write!(f, "coframe change matrix is singular"),
        }
    }
}

impl fmt::Debug for FormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::error::Error for FormError {}

/// Sparse exterior form of fixed degree. No zero coefficients are stored;
/// equality is term-wise.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm<T> {
    dim: u8,
    degree: u8,
    terms: BTreeMap<MultiIndex, T>,
}

impl<T: Ring> KForm<T> {
    pub fn zero(dim: u8, degree: u8) -> Self {
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant function 1 viewed as a 0-form.
    pub fn unit(dim: u8) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex(Vec::new()), T::one());
        KForm {
            dim,
            degree: 0,
            terms,
        }
    }

    pub fn monomial(dim: u8, indices: &[u8], coeff: T) -> Result<Self, FormError> {
        let mi = MultiIndex::new(indices)?;
        if let Some(&bad) = indices.iter().find(|&&i| i > dim) {
            return Err(FormError::IndexOutOfRange { index: bad, dim });
        }
        let mut form = KForm::zero(dim, indices.len() as u8);
        form.add_term(mi, coeff);
        Ok(form)
    }

    /// The coframe element e^i as a 1-form.
    pub fn basis_one_form(dim: u8, i: u8) -> Result<Self, FormError> {
        Self::monomial(dim, &[i], T::one())
    }

    pub fn from_terms<I>(dim: u8, degree: u8, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (MultiIndex, T)>,
    {
        let mut form = KForm::zero(dim, degree);
        for (mi, c) in terms {
            if mi.len() as u8 != degree {
                return Err(FormError::DegreeMismatch {
                    expected: degree,
                    found: mi.len() as u8,
                });
            }
            if let Some(&bad) = mi.indices().iter().find(|&&i| i > dim) {
                return Err(FormError::IndexOutOfRange { index: bad, dim });
            }
            form.add_term(mi, c);
        }
        Ok(form)
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, indices: &[u8]) -> T {
        match MultiIndex::new(indices) {
            Ok(mi) => self.terms.get(&mi).cloned().unwrap_or_else(T::zero),
            Err(_) => T::zero(),
        }
    }

    fn add_term(&mut self, mi: MultiIndex, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mi) {
            None => {
                self.terms.insert(mi, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(mi, sum);
                }
            }
        }
    }

    /// Reinterprets the form on a larger coframe (same monomials).
    pub fn embed(&self, new_dim: u8) -> Result<Self, FormError> {
        for (mi, _) in self.terms() {
            if let Some(&bad) = mi.indices().iter().find(|&&i| i > new_dim) {
                return Err(FormError::IndexOutOfRange {
                    index: bad,
                    dim: new_dim,
                });
            }
        }
        Ok(KForm {
            dim: new_dim,
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return KForm::zero(self.dim, self.degree);
        }
        let mut out = KForm::zero(self.dim, self.degree);
        for (mi, t) in &self.terms {
            out.add_term(mi.clone(), t.clone() * c.clone());
        }
        out
    }

    /// Exterior product. Degrees add; result is the zero form when the
    /// degree exceeds the ambient dimension.
    pub fn wedge(&self, other: &KForm<T>) -> Result<KForm<T>, FormError> {
        if self.dim != other.dim {
            return Err(FormError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        let mut out = KForm::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (mi, a) in &self.terms {
            for (mj, b) in &other.terms {
                if let Some((sign, merged)) = mi.merge(mj) {
                    let mut c = a.clone() * b.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(merged, c);
                }
            }
        }
        Ok(out)
    }

    /// Hodge star for the orthonormal coframe with volume form
    /// `orientation`·e^{1…n}: *e^I = ε·e^{I^c}, ε the sign of (I, I^c).
    pub fn hodge_star(&self, orientation: i8) -> KForm<T> {
        assert!(orientation == 1 || orientation == -1);
        let mut out = KForm::zero(self.dim, self.dim - self.degree);
        for (mi, c) in &self.terms {
            let (sign, comp) = mi.complement(self.dim);
            let mut v = c.clone();
            if sign * orientation < 0 {
                v = -v;
            }
            out.add_term(comp, v);
        }
        out
    }

    /// Interior product with the j-th orthonormal frame vector.
    pub fn contract(&self, j: u8) -> Result<KForm<T>, FormError> {
        if j == 0 || j > self.dim {
            return Err(FormError::IndexOutOfRange { index: j, dim: self.dim });
        }
        if self.degree == 0 {
            return Ok(KForm::zero(self.dim, 0));
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (mi, c) in &self.terms {
            if let Ok(pos) = mi.0.binary_search(&j) {
                let mut rest = mi.0.clone();
                rest.remove(pos);
                let mut v = c.clone();
                if pos % 2 == 1 {
                    v = -v;
                }
                out.add_term(MultiIndex(rest), v);
            }
        }
        Ok(out)
    }

    /// Applies a linear coframe substitution e^i ↦ Σ_j M[i][j]·e^j,
    /// extended multiplicatively over wedge monomials.
    pub fn substitute(&self, change: &CoframeChange<T>) -> Result<KForm<T>, FormError> {
        if change.dim() != self.dim {
            return Err(FormError::DimensionMismatch {
                left: self.dim,
                right: change.dim(),
            });
        }
        let mut out = KForm::zero(self.dim, self.degree);
        for (mi, c) in &self.terms {
            let mut image = KForm::unit(self.dim).scale(c);
            for &i in mi.indices() {
                image = image.wedge(change.image_of(i))?;
            }
            for (k, v) in image.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }
}

impl<T: Ring> Add for KForm<T> {
    type Output = KForm<T>;
    fn add(self, rhs: KForm<T>) -> KForm<T> {
        assert_eq!(self.dim, rhs.dim, "ambient dimension mismatch");
        assert_eq!(self.degree, rhs.degree, "degree mismatch");
        let mut out = self;
        for (mi, c) in rhs.terms {
            out.add_term(mi, c);
        }
        out
    }
}

impl<T: Ring> Sub for KForm<T> {
    type Output = KForm<T>;
    fn sub(self, rhs: KForm<T>) -> KForm<T> {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for KForm<T> {
    type Output = KForm<T>;
    fn neg(self) -> KForm<T> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (mi, c) in self.terms {
            out.add_term(mi, -c);
        }
        out
    }
}

impl KForm<Scalar> {
    /// Literal text form, e.g. `-1*e{12}+1*e{34}+1*e{56}`.
    pub fn to_literal(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (mi, c)) in self.terms.iter().enumerate() {
            let cs = c.to_literal();
            if i > 0 && !cs.starts_with('-') {
                out.push('+');
            }
            if mi.is_empty() {
                out.push_str(&cs);
            } else {
                let ix: Vec<String> = mi.indices().iter().map(|v| v.to_string()).collect();
                let sep = if mi.indices().iter().all(|&v| v <= 9) {
                    ix.join("")
                } else {
                    ix.join(" ")
                };
                out.push_str(&format!("{cs}*e{{{sep}}}"));
            }
        }
        out
    }
}

impl<T: Ring + fmt::Display> fmt::Display for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mi, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            // hide unit coefficients on monomials, but not on composite ones
            let unit = mag == "1";
            if mi.is_empty() {
                write!(f, "{mag}")?;
            } else if unit {
                write!(f, "{mi}")?;
            } else if mag.contains('+') || mag.contains('-') {
                write!(f, "({mag}){mi}")?;
            } else {
                write!(f, "{mag}{mi}")?;
            }
        }
        Ok(())
    }
}

impl<T: Ring + fmt::Display> fmt::Debug for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Invertible linear change of coframe, rows giving images of basis covectors.
#[derive(Clone, PartialEq)]
pub struct CoframeChange<T> {
    dim: u8,
    /// images[i] = image of e^{i+1}, a 1-form
    images: Vec<KForm<T>>,
    matrix: Matrix<T>,
}

impl<T: Ring + fmt::Display> fmt::Debug for CoframeChange<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coframe change of dimension {}", self.dim)
    }
}

impl<T> CoframeChange<T> {
    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    fn image_of(&self, i: u8) -> &KForm<T> {
        &self.images[(i - 1) as usize]
    }
}

impl<T: Field> CoframeChange<T> {
    /// Builds the change e^i ↦ Σ_j M[i][j]·e^j; rejects singular matrices.
    pub fn new(matrix: Vec<Vec<T>>) -> Result<Self, FormError> {
        let n = matrix.len();
        assert!(n > 0 && n <= u8::MAX as usize);
        for row in &matrix {
            assert_eq!(row.len(), n, "coframe change matrix must be square");
        }
        let m = Matrix::from_rows(matrix);
        if m.determinant().is_zero() {
            return Err(FormError::SingularMatrix);
        }
        let dim = n as u8;
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let mut f = KForm::zero(dim, 1);
            for j in 0..n {
                f.add_term(MultiIndex(vec![(j + 1) as u8]), m.get(i, j).clone());
            }
            images.push(f);
        }
        Ok(CoframeChange {
            dim,
            images,
            matrix: m,
        })
    }

    pub fn identity(dim: u8) -> Self {
        let n = dim as usize;
        let rows: Vec<Vec<T>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        CoframeChange::new(rows).expect("identity is invertible")
    }

    /// The composite change "apply self, then apply other".
    pub fn then(&self, other: &CoframeChange<T>) -> CoframeChange<T> {
        // (B∘A)[i][j] = Σ_k A[i][k]·B[k][j] under the row convention
        let prod = self.matrix.mul(&other.matrix);
        CoframeChange::new(prod.into_rows()).expect("product of invertibles is invertible")
    }
}

/// Convenience constructor used throughout the canonical examples:
/// a signed sum of unit monomials, e.g. `form6(&[("-", 12), ("+", 34)])`.
pub fn signed_monomials(dim: u8, terms: &[(i64, &[u8])]) -> KForm<Scalar> {
    let mut out = KForm::zero(dim, terms.first().map_or(0, |(_, ix)| ix.len() as u8));
    for (c, ix) in terms {
        let m = KForm::monomial(dim, ix, Scalar::int(*c)).expect("valid monomial");
        out = out + m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Form = KForm<Scalar>;

    fn e(dim: u8, ix: &[u8]) -> Form {
        KForm::monomial(dim, ix, Scalar::int(1)).unwrap()
    }

    /// Independent wedge oracle: the shuffle-sum definition of the exterior
    /// product, evaluated coefficient by coefficient. Used to freeze the
    /// derived example values without trusting the merge-sign path.
    fn oracle_wedge_coeff(f: &Form, g: &Form, target: &[u8]) -> Scalar {
        fn subsets(k: usize, of: &[u8]) -> Vec<Vec<u8>> {
            if k == 0 {
                return vec![Vec::new()];
            }
            if of.len() < k {
                return Vec::new();
            }
            let mut out = Vec::new();
            for (i, &first) in of.iter().enumerate() {
                for mut rest in subsets(k - 1, &of[i + 1..]) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        fn shuffle_sign(a: &[u8], b: &[u8]) -> i64 {
            // parity of the permutation sorting (a, b)
            let mut v: Vec<u8> = a.to_vec();
            v.extend_from_slice(b);
            let mut sign = 1i64;
            for i in 0..v.len() {
                for j in (i + 1)..v.len() {
                    if v[i] > v[j] {
                        sign = -sign;
                    }
                }
            }
            sign
        }
        let p = f.degree() as usize;
        let mut total = Scalar::zero();
        for left in subsets(p, target) {
            let right: Vec<u8> = target.iter().copied().filter(|i| !left.contains(i)).collect();
            let sign = shuffle_sign(&left, &right);
            let c = f.coeff(&left) * g.coeff(&right) * Scalar::int(sign);
            total = total + c;
        }
        total
    }

    #[test]
    fn wedge_basics() {
        let e1 = e(6, &[1]);
        let e2 = e(6, &[2]);
        assert_eq!(e1.wedge(&e2).unwrap(), e(6, &[1, 2]));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        // degree beyond dim collapses to zero
        let top = e(2, &[1, 2]);
        assert!(top.wedge(&e(2, &[1])).unwrap().is_zero());
        // dimension mismatch is an error
        assert!(e(6, &[1]).wedge(&e(7, &[1])).is_err());
    }

    #[test]
    fn sigma_squared_matches_shuffle_oracle() {
        // σ = −e12 + e34 + e56; σ∧σ = 2(−e1234 − e1256 + e3456)
        let sigma = signed_monomials(6, &[(-1, &[1, 2]), (1, &[3, 4]), (1, &[5, 6])]);
        let sq = sigma.wedge(&sigma).unwrap();
        let expected = signed_monomials(
            6,
            &[(-2, &[1, 2, 3, 4]), (-2, &[1, 2, 5, 6]), (2, &[3, 4, 5, 6])],
        );
        assert_eq!(sq, expected);
        // cross-check every coefficient against the shuffle-sum definition
        for (mi, c) in sq.terms() {
            assert_eq!(*c, oracle_wedge_coeff(&sigma, &sigma, mi.indices()));
        }
    }

    #[test]
    fn hodge_star_on_monomials() {
        // *1 = e^{1…n}
        let one: Form = KForm::unit(5);
        assert_eq!(one.hodge_star(1), e(5, &[1, 2, 3, 4, 5]));
        // n = 7: *(e567) = e1234 (permutation (5,6,7,1,2,3,4) is even)
        assert_eq!(e(7, &[5, 6, 7]).hodge_star(1), e(7, &[1, 2, 3, 4]));
        // reversed orientation flips the sign
        assert_eq!(e(7, &[5, 6, 7]).hodge_star(-1), -e(7, &[1, 2, 3, 4]));
    }

    #[test]
    fn double_star_sign() {
        // ** = (−1)^{k(n−k)} on degree k
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1u8..=8);
            let k = rng.gen_range(0u8..=n);
            let f = random_form(&mut rng, n, k);
            let ss = f.hodge_star(1).hodge_star(1);
            let sign = (k as u32 * (n - k) as u32) % 2;
            let expected = if sign == 0 { f.clone() } else { -f.clone() };
            assert_eq!(ss, expected);
        }
    }

    #[test]
    fn graded_commutativity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..80 {
            let n = rng.gen_range(2u8..=7);
            let p = rng.gen_range(0u8..=3.min(n));
            let q = rng.gen_range(0u8..=3.min(n));
            let f = random_form(&mut rng, n, p);
            let g = random_form(&mut rng, n, q);
            let fg = f.wedge(&g).unwrap();
            let gf = g.wedge(&f).unwrap();
            let expected = if (p as u32 * q as u32) % 2 == 0 {
                gf.clone()
            } else {
                -gf.clone()
            };
            assert_eq!(fg, expected);
        }
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(e(6, &[1, 2]).contract(1).unwrap(), e(6, &[2]));
        assert!(e(6, &[1, 2]).contract(3).unwrap().is_zero());
        // σ of the six-dimensional library: ι₂σ = e1
        let sigma = signed_monomials(6, &[(-1, &[1, 2]), (1, &[3, 4]), (1, &[5, 6])]);
        assert_eq!(sigma.contract(2).unwrap(), e(6, &[1]));
        // degree-0 input contracts to zero
        let one: Form = KForm::unit(6);
        assert!(one.contract(3).unwrap().is_zero());
    }

    #[test]
    fn contraction_is_an_antiderivation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(2u8..=7);
            let p = rng.gen_range(1u8..=3.min(n));
            let q = rng.gen_range(0u8..=2.min(n));
            let f = random_form(&mut rng, n, p);
            let g = random_form(&mut rng, n, q);
            let j = rng.gen_range(1u8..=n);
            // ι_j(f∧g) = ι_j f ∧ g + (−1)^p f ∧ ι_j g
            let lhs = f.wedge(&g).unwrap().contract(j).unwrap();
            let mut rhs = f.contract(j).unwrap().wedge(&g).unwrap();
            if q > 0 {
                let tail = f.wedge(&g.contract(j).unwrap()).unwrap();
                rhs = if p % 2 == 0 { rhs + tail } else { rhs - tail };
            }
            assert_eq!(lhs, rhs);
            // ι_j ∘ ι_j = 0
            assert!(f.contract(j).unwrap().contract(j).unwrap().is_zero());
        }
    }

    #[test]
    fn substitution_identity_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let id = CoframeChange::<Scalar>::identity(4);
        for _ in 0..40 {
            let deg = rng.gen_range(0u8..=3);
            let f = random_form(&mut rng, 4, deg);
            assert_eq!(f.substitute(&id).unwrap(), f);
            let a = random_invertible(&mut rng, 4);
            let b = random_invertible(&mut rng, 4);
            let step = f.substitute(&a).unwrap().substitute(&b).unwrap();
            let composed = f.substitute(&a.then(&b)).unwrap();
            assert_eq!(step, composed);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let rows = vec![
            vec![Scalar::int(1), Scalar::int(2)],
            vec![Scalar::int(2), Scalar::int(4)],
        ];
        assert_eq!(CoframeChange::new(rows).unwrap_err(), FormError::SingularMatrix);
    }

    fn random_form(rng: &mut ChaCha8Rng, dim: u8, degree: u8) -> Form {
        let mut out = Form::zero(dim, degree);
        for _ in 0..rng.gen_range(0..=4) {
            let mut ix: Vec<u8> = (1..=dim).collect();
            for i in (1..ix.len()).rev() {
                ix.swap(i, rng.gen_range(0..=i));
            }
            let mut ix: Vec<u8> = ix.into_iter().take(degree as usize).collect();
            ix.sort_unstable();
            let c = Scalar::rat(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=3));
            if let Ok(m) = KForm::monomial(dim, &ix, c) {
                out = out + m;
            }
        }
        out
    }

    fn random_invertible(rng: &mut ChaCha8Rng, dim: u8) -> CoframeChange<Scalar> {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..dim)
                .map(|_| {
                    (0..dim)
                        .map(|_| Scalar::int(rng.gen_range(-2i64..=2)))
                        .collect()
                })
                .collect();
            if let Ok(c) = CoframeChange::new(rows) {
                return c;
            }
        }
    }
}
