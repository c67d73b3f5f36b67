//! Chevalley–Eilenberg calculus on Lie algebras given dually by their
//! structure equations de^i.
//!
//! A [`LieAlgebraSpec`] stores the 2-forms de^i; the bracket is recovered
//! through dα(X,Y) = −α([X,Y]). Construction enforces d∘d = 0 on every
//! generator, which is the Jacobi identity.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{FormError, KForm, MultiIndex};
use crate::linalg::{Matrix, RowSpace};
use crate::poly::Poly;
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq)]
pub enum LieError {
    JacobiFailure { generator: u8, residue: String },
    DimensionMismatch { left: u8, right: u8 },
    WrongDegree { generator: u8, degree: u8 },
    OddDimension(u8),
    NotNilpotent,
    SymplecticUndetermined { kernel_dim: usize },
    Form(FormError),
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::JacobiFailure { generator, residue } => write!(
                f,
                "Jacobi identity fails: d\u{b2}e{generator} = {residue} \u{2260} 0"
            ),
            LieError::DimensionMismatch { left, right } => {
                write!(f, "ambient dimension mismatch: {left} vs {right}")
            }
            LieError::WrongDegree { generator, degree } => {
                write!(f, "de{generator} has degree {degree}, expected 2")
            }
            LieError::OddDimension(n) => {
                write!(f, "symplectic structures need even dimension, got {n}")
            }
            LieError::NotNilpotent => write!(f, "ascending series stalls: algebra is not nilpotent"),
            LieError::SymplecticUndetermined { kernel_dim } => write!(
                f,
                "cannot certify absence of a symplectic form: kernel dimension {kernel_dim} \
                 exceeds the symbolic expansion guard"
            ),
            LieError::Form(e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Debug for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::error::Error for LieError {}

impl From<FormError> for LieError {
    fn from(e: FormError) -> Self {
        LieError::Form(e)
    }
}

/// Structure equations of a Lie algebra: diffs[i] = de^{i+1}.
#[derive(Clone, PartialEq)]
pub struct LieAlgebraSpec<T> {
    dim: u8,
    diffs: Vec<KForm<T>>,
}

impl<T: crate::scalar::Ring + fmt::Display> fmt::Debug for LieAlgebraSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {}", self.dim)?;
        for (i, d) in self.diffs.iter().enumerate() {
            if !d.is_zero() {
                write!(f, "; de{} = {}", i + 1, d)?;
            }
        }
        Ok(())
    }
}

/// Betti numbers of the invariant (Chevalley–Eilenberg) complex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BettiVector {
    pub b: Vec<usize>,
}

impl BettiVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.b
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.b.len();
        (0..n).all(|k| self.b[k] == self.b[n - 1 - k])
    }
}

/// How a symplectic witness was found.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessMethod {
    Deterministic,
    Randomized,
    SymbolicSearch,
}

#[derive(Clone)]
pub struct SymplecticWitness<T> {
    pub form: KForm<T>,
    pub top_power: KForm<T>,
    pub method: WitnessMethod,
}

impl<T: Field> LieAlgebraSpec<T> {
    /// Validates degrees and the Jacobi identity (d² = 0 on generators).
    pub fn new(dim: u8, diffs: Vec<KForm<T>>) -> Result<Self, LieError> {
        assert_eq!(diffs.len(), dim as usize, "one differential per generator");
        for (i, d) in diffs.iter().enumerate() {
            if d.dim() != dim {
                return Err(LieError::DimensionMismatch {
                    left: dim,
                    right: d.dim(),
                });
            }
            if d.degree() != 2 {
                return Err(LieError::WrongDegree {
                    generator: (i + 1) as u8,
                    degree: d.degree(),
                });
            }
        }
        let spec = LieAlgebraSpec { dim, diffs };
        if let Err((g, residue)) = spec.jacobi_check() {
            let support: Vec<String> = residue.terms().map(|(mi, _)| mi.to_string()).collect();
            return Err(LieError::JacobiFailure {
                generator: g,
                residue: format!("supported on {}", support.join(", ")),
            });
        }
        Ok(spec)
    }

    pub fn abelian(dim: u8) -> Self {
        LieAlgebraSpec {
            dim,
            diffs: (0..dim).map(|_| KForm::zero(dim, 2)).collect(),
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// de^i for 1-based generator index i.
    pub fn diff_of_generator(&self, i: u8) -> &KForm<T> {
        &self.diffs[(i - 1) as usize]
    }

    /// d²e^i = 0 for every generator; first failure is reported with its
    /// nonzero 3-form residue.
    pub fn jacobi_check(&self) -> Result<(), (u8, KForm<T>)> {
        for i in 1..=self.dim {
            let dd = self
                .ce_differential(self.diff_of_generator(i))
                .expect("dimensions agree by construction");
            if !dd.is_zero() {
                return Err((i, dd));
            }
        }
        Ok(())
    }

    /// Structure constant c_{ij}^k with [e_i, e_j] = Σ_k c_{ij}^k e_k,
    /// recovered from de^k(e_i, e_j) = −c_{ij}^k. Indices 1-based.
    pub fn bracket_coeff(&self, i: u8, j: u8, k: u8) -> T {
        if i == j {
            return T::zero();
        }
        let (lo, hi, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let c = self.diff_of_generator(k).coeff(&[lo, hi]);
        let c = -c;
        if flip {
            -c
        } else {
            c
        }
    }

    /// True when every structure constant is a plain rational (no √3 part
    /// under the concrete scalar field). Generic scalars report componentwise
    /// rationality through the supplied predicate.
    pub fn structure_constants_satisfy(&self, pred: impl Fn(&T) -> bool) -> bool {
        self.diffs
            .iter()
            .all(|d| d.terms().all(|(_, c)| pred(c)))
    }

    /// The graded-Leibniz extension of de^i to arbitrary invariant forms.
    pub fn ce_differential(&self, f: &KForm<T>) -> Result<KForm<T>, LieError> {
        if f.dim() != self.dim {
            return Err(LieError::DimensionMismatch {
                left: self.dim,
                right: f.dim(),
            });
        }
        if f.degree() == 0 {
            return Ok(KForm::zero(self.dim, 1));
        }
        let mut out = KForm::zero(self.dim, f.degree() + 1);
        for (mi, c) in f.terms() {
            let ix = mi.indices();
            for p in 0..ix.len() {
                let prefix = KForm::monomial(self.dim, &ix[..p], c.clone())?;
                let suffix = KForm::monomial(self.dim, &ix[p + 1..], T::one())?;
                let term = prefix
                    .wedge(self.diff_of_generator(ix[p]))?
                    .wedge(&suffix)?;
                out = if p % 2 == 0 { out + term } else { out - term };
            }
        }
        Ok(out)
    }

    /// Embeds the algebra into dim + extra by adjoining closed generators.
    pub fn extend_by_abelian(&self, extra: u8) -> Self {
        let new_dim = self.dim + extra;
        let mut diffs: Vec<KForm<T>> = self
            .diffs
            .iter()
            .map(|d| d.embed(new_dim).expect("embedding into larger coframe"))
            .collect();
        for _ in 0..extra {
            diffs.push(KForm::zero(new_dim, 2));
        }
        LieAlgebraSpec {
            dim: new_dim,
            diffs,
        }
    }

    /// Rewrites the structure equations in the coframe ê^i = Σ_j M[i][j] e^j.
    pub fn change_coframe(&self, m: &Matrix<T>) -> Result<Self, LieError> {
        assert_eq!(m.nrows(), self.dim as usize);
        assert_eq!(m.ncols(), self.dim as usize);
        let inv = m.inverse().ok_or(LieError::Form(FormError::SingularMatrix))?;
        let back = crate::forms::CoframeChange::new(inv.into_rows())?;
        let mut diffs = Vec::with_capacity(self.dim as usize);
        for i in 0..self.dim as usize {
            let mut combo = KForm::zero(self.dim, 2);
            for j in 0..self.dim as usize {
                combo = combo + self.diffs[j].scale(m.get(i, j));
            }
            diffs.push(combo.substitute(&back)?);
        }
        LieAlgebraSpec::new(self.dim, diffs)
    }

    /// Sorted monomial basis of Λ^k.
    pub fn k_basis(&self, k: u8) -> Vec<MultiIndex> {
        k_subsets(self.dim, k)
    }

    /// Coordinates of a form in the sorted monomial basis of its degree.
    pub fn form_to_vec(&self, f: &KForm<T>, basis: &[MultiIndex]) -> Vec<T> {
        let mut v = vec![T::zero(); basis.len()];
        for (mi, c) in f.terms() {
            let pos = basis
                .binary_search(mi)
                .expect("monomial outside the ambient basis");
            v[pos] = c.clone();
        }
        v
    }

    pub fn vec_to_form(&self, v: &[T], basis: &[MultiIndex], degree: u8) -> KForm<T> {
        let terms = basis
            .iter()
            .cloned()
            .zip(v.iter().cloned())
            .filter(|(_, c)| !c.is_zero());
        KForm::from_terms(self.dim, degree, terms).expect("basis monomials are valid")
    }

    /// Matrix of d: Λ^k → Λ^{k+1} in the sorted monomial bases.
    pub fn d_matrix(&self, k: u8) -> Matrix<T> {
        let dom = self.k_basis(k);
        let cod = if k < self.dim {
            self.k_basis(k + 1)
        } else {
            Vec::new()
        };
        let mut m = Matrix::zeros(cod.len(), dom.len());
        for (j, mi) in dom.iter().enumerate() {
            let f = KForm::from_terms(self.dim, k, [(mi.clone(), T::one())])
                .expect("basis monomial");
            let df = self.ce_differential(&f).expect("same ambient dimension");
            for (target, c) in df.terms() {
                let i = cod.binary_search(target).expect("codomain basis");
                *m.get_mut(i, j) = c.clone();
            }
        }
        m
    }

    /// Betti numbers of the invariant complex:
    /// b_k = dim ker(d|Λ^k) − rank(d|Λ^{k−1}).
    pub fn invariant_cohomology(&self) -> BettiVector {
        let n = self.dim;
        let ranks: Vec<usize> = (0..=n).map(|k| self.d_matrix(k).rank()).collect();
        let mut b = Vec::with_capacity(n as usize + 1);
        for k in 0..=n as usize {
            let dim_k = binomial(n as usize, k);
            let rank_out = ranks[k];
            let rank_in = if k == 0 { 0 } else { ranks[k - 1] };
            b.push(dim_k - rank_out - rank_in);
        }
        BettiVector { b }
    }

    /// Exact primitive: g with dg = target, or None when target is not exact.
    pub fn solve_d(&self, target: &KForm<T>) -> Result<Option<KForm<T>>, LieError> {
        if target.dim() != self.dim {
            return Err(LieError::DimensionMismatch {
                left: self.dim,
                right: target.dim(),
            });
        }
        let k = target.degree();
        assert!(k >= 1, "target degree must be at least 1");
        if target.is_zero() {
            return Ok(Some(KForm::zero(self.dim, k - 1)));
        }
        let dom = self.k_basis(k - 1);
        let cod = self.k_basis(k);
        let m = self.d_matrix(k - 1);
        let b = self.form_to_vec(target, &cod);
        Ok(m.solve(&b).map(|x| self.vec_to_form(&x, &dom, k - 1)))
    }

    /// Smallest s with V_s the full dual space, where V_0 is the space of
    /// closed 1-forms and V_{i+1} = {α : dα ∈ Λ²V_i}. Abelian gives 1.
    pub fn nilpotency_step(&self) -> Result<u32, LieError> {
        let n = self.dim as usize;
        let one_basis = self.k_basis(1);
        let two_basis = self.k_basis(2);
        let d1 = self.d_matrix(1);

        let mut v: RowSpace<T> = RowSpace::from_vectors(n, d1.nullspace());
        let mut step = 1u32;
        loop {
            if v.dim() == n {
                return Ok(step);
            }
            // Λ²V as a subspace of Λ²
            let v_forms: Vec<KForm<T>> = v
                .basis()
                .iter()
                .map(|row| self.vec_to_form(row, &one_basis, 1))
                .collect();
            let mut wedge_space: RowSpace<T> = RowSpace::new(two_basis.len());
            for (a, fa) in v_forms.iter().enumerate() {
                for fb in v_forms.iter().skip(a + 1) {
                    let w = fa.wedge(fb).expect("same dimension");
                    wedge_space.insert(self.form_to_vec(&w, &two_basis));
                }
            }
            // next = {α : dα ∈ wedge_space}: nullspace of (x, c) ↦ D·x − Σ c_j w_j
            let wd = wedge_space.dim();
            let mut combined = Matrix::zeros(two_basis.len(), n + wd);
            for i in 0..two_basis.len() {
                for j in 0..n {
                    *combined.get_mut(i, j) = d1.get(i, j).clone();
                }
                for (jj, w) in wedge_space.basis().iter().enumerate() {
                    *combined.get_mut(i, n + jj) = -w[i].clone();
                }
            }
            let mut next: RowSpace<T> = RowSpace::new(n);
            for null in combined.nullspace() {
                next.insert(null[..n].to_vec());
            }
            if next.dim() <= v.dim() {
                return Err(LieError::NotNilpotent);
            }
            v = next;
            step += 1;
        }
    }
}

impl<T: Field + From<i64>> LieAlgebraSpec<T> {
    /// Searches the kernel of d on Λ² for a non-degenerate closed 2-form.
    ///
    /// Candidates are tried at deterministic rational points, then at
    /// seeded random points; absence is only declared after the Pfaffian
    /// of the generic kernel element expands to the zero polynomial.
    pub fn symplectic_existence(
        &self,
        seed: u64,
    ) -> Result<Option<SymplecticWitness<T>>, LieError> {
        if self.dim % 2 != 0 {
            return Err(LieError::OddDimension(self.dim));
        }
        let half = (self.dim / 2) as usize;
        let two_basis = self.k_basis(2);
        let kernel: Vec<Vec<T>> = self.d_matrix(2).nullspace();
        if kernel.is_empty() {
            return Ok(None);
        }
        let kernel_forms: Vec<KForm<T>> = kernel
            .iter()
            .map(|v| self.vec_to_form(v, &two_basis, 2))
            .collect();
        let m = kernel_forms.len();

        let check = |form: &KForm<T>, method: WitnessMethod| -> Option<SymplecticWitness<T>> {
            let mut power = form.clone();
            for _ in 1..half {
                power = power.wedge(form).expect("same dimension");
            }
            if power.is_zero() {
                None
            } else {
                debug_assert!(self
                    .ce_differential(form)
                    .expect("same dimension")
                    .is_zero());
                Some(SymplecticWitness {
                    form: form.clone(),
                    top_power: power,
                    method,
                })
            }
        };
        let combine = |coeffs: &[T]| -> KForm<T> {
            let mut out = KForm::zero(self.dim, 2);
            for (c, f) in coeffs.iter().zip(&kernel_forms) {
                out = out + f.scale(c);
            }
            out
        };

        // deterministic candidates: a greedy pairing of closed coordinate
        // monomials, then kernel basis vectors, an all-ones vector, a ramp
        if let Some(greedy) = self.greedy_monomial_pairing() {
            if let Some(w) = check(&greedy, WitnessMethod::Deterministic) {
                return Ok(Some(w));
            }
        }
        for f in &kernel_forms {
            if let Some(w) = check(f, WitnessMethod::Deterministic) {
                return Ok(Some(w));
            }
        }
        let ones: Vec<T> = (0..m).map(|_| T::one()).collect();
        if let Some(w) = check(&combine(&ones), WitnessMethod::Deterministic) {
            return Ok(Some(w));
        }
        let ramp: Vec<T> = (0..m).map(|j| T::from((j + 1) as i64)).collect();
        if let Some(w) = check(&combine(&ramp), WitnessMethod::Deterministic) {
            return Ok(Some(w));
        }

        // randomized points
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..128 {
            let coeffs: Vec<T> = (0..m).map(|_| T::from(rng.gen_range(-9i64..=9))).collect();
            if let Some(w) = check(&combine(&coeffs), WitnessMethod::Randomized) {
                return Ok(Some(w));
            }
        }

        // symbolic Pfaffian: expand (Σ x_j κ_j)^{n/2} with polynomial
        // coefficients; the top coefficient vanishes identically iff
        // no symplectic form exists in the kernel
        if m > 15 {
            return Err(LieError::SymplecticUndetermined { kernel_dim: m });
        }
        let mut generic: KForm<Poly<T>> = KForm::zero(self.dim, 2);
        for (j, f) in kernel_forms.iter().enumerate() {
            let xj = Poly::var(m, j);
            for (mi, c) in f.terms() {
                let coeff = xj.clone() * Poly::constant(m, c.clone());
                generic = generic
                    + KForm::from_terms(self.dim, 2, [(mi.clone(), coeff)])
                        .expect("valid monomial");
            }
        }
        let mut power = generic.clone();
        for _ in 1..half {
            power = power.wedge(&generic).expect("same dimension");
        }
        let top: Vec<u8> = (1..=self.dim).collect();
        let pfaffian = power.coeff(&top);
        if pfaffian.is_zero() {
            return Ok(None);
        }
        // the Pfaffian is a nonzero polynomial; sample until it evaluates
        // to a nonzero scalar (Schwartz–Zippel over a growing range)
        for round in 1..=64u32 {
            let bound = 8i64 * round as i64;
            for _ in 0..256 {
                let coeffs: Vec<T> = (0..m)
                    .map(|_| T::from(rng.gen_range(-bound..=bound)))
                    .collect();
                if !pfaffian.eval(&coeffs).is_zero() {
                    let w = check(&combine(&coeffs), WitnessMethod::SymbolicSearch)
                        .expect("nonzero Pfaffian value means nonzero top power");
                    return Ok(Some(w));
                }
            }
        }
        Err(LieError::SymplecticUndetermined { kernel_dim: m })
    }

    /// Tries to pair up all coframe indices with closed coordinate 2-forms
    /// e^{ij}; returns their sum when a perfect pairing exists.
    fn greedy_monomial_pairing(&self) -> Option<KForm<T>> {
        let n = self.dim;
        let mut used = vec![false; n as usize + 1];
        let mut acc = KForm::zero(n, 2);
        for i in 1..=n {
            if used[i as usize] {
                continue;
            }
            let mut paired = false;
            for j in (i + 1)..=n {
                if used[j as usize] {
                    continue;
                }
                let mono = KForm::monomial(n, &[i, j], T::one()).expect("valid pair");
                if self
                    .ce_differential(&mono)
                    .expect("same dimension")
                    .is_zero()
                {
                    used[i as usize] = true;
                    used[j as usize] = true;
                    acc = acc + mono;
                    paired = true;
                    break;
                }
            }
            if !paired {
                return None;
            }
        }
        Some(acc)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing k-tuples in 1..=n, in lexicographic order.
pub(crate) fn k_subsets(n: u8, k: u8) -> Vec<MultiIndex> {
    fn rec(start: u8, n: u8, k: u8, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
        if k == 0 {
            out.push(MultiIndex::new(cur).expect("strictly increasing by construction"));
            return;
        }
        for i in start..=n.saturating_sub(k - 1) {
            cur.push(i);
            rec(i + 1, n, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n as usize, k as usize));
    if k > n {
        return out;
    }
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}
