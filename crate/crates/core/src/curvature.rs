//! Levi-Civita connection and curvature of the left-invariant metric that
//! makes the coframe orthonormal.
//!
//! Brackets come from the structure equations through dα(X,Y) = −α([X,Y]);
//! the connection is the Koszul formula specialized to left-invariant
//! fields, 2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y). The
//! curvature convention is R(X,Y) = ∇_{[X,Y]} − [∇_X, ∇_Y], which makes
//! the bi-invariant metric on SU(2) come out with positive sectional
//! curvature (the round-sphere oracle used by the volume expansions).

use num_traits::Zero;

use crate::lie::LieAlgebraSpec;
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// gamma[i][j][k] = g(∇_{e_i} e_j, e_k), 1-based accessors.
#[derive(Clone, PartialEq, Debug)]
pub struct ConnectionTable<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Field> ConnectionTable<T> {
    pub fn dim(&self) -> u8 {
        self.n as u8
    }

    pub fn gamma(&self, i: u8, j: u8, k: u8) -> &T {
        let (i, j, k) = ((i - 1) as usize, (j - 1) as usize, (k - 1) as usize);
        &self.data[(i * self.n + j) * self.n + k]
    }
}

/// Curvature components R[i][j][k][l] = g(R(e_i,e_j)e_k, e_l) in the
/// orthonormal frame, 1-based accessors.
#[derive(Clone, PartialEq, Debug)]
pub struct CurvatureTensor<T> {
    n: usize,
    data: Vec<T>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CurvatureScalars<T> {
    pub s: T,
    pub ric_norm_sq: T,
    pub r_norm_sq: T,
    /// Identically zero: the scalar curvature of an invariant metric is
    /// constant on the group.
    pub laplacian_s: T,
}

#[derive(Clone, PartialEq, Debug)]
pub struct EinsteinReport<T> {
    pub einstein: bool,
    /// Exact Ricci eigenvalues when the Ricci matrix is diagonal in the
    /// frame; None otherwise (the eigenvalues may live outside the field).
    pub eigenvalues: Option<Vec<T>>,
    pub ricci: Matrix<T>,
}

fn half<T: Field>() -> T {
    T::one() / (T::one() + T::one())
}

/// Koszul connection of the orthonormal invariant metric.
pub fn koszul_connection<T: Field>(spec: &LieAlgebraSpec<T>) -> ConnectionTable<T> {
    let n = spec.dim() as usize;
    let h = half::<T>();
    let mut data = vec![T::zero(); n * n * n];
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            for k in 1..=n as u8 {
                let c = spec.bracket_coeff(i, j, k) - spec.bracket_coeff(j, k, i)
                    + spec.bracket_coeff(k, i, j);
                let idx = (((i - 1) as usize) * n + (j - 1) as usize) * n + (k - 1) as usize;
                data[idx] = h.clone() * c;
            }
        }
    }
    ConnectionTable { n, data }
}

/// Assembles R(X,Y) = ∇_{[X,Y]} − [∇_X, ∇_Y] from the connection table.
pub fn curvature<T: Field>(spec: &LieAlgebraSpec<T>) -> CurvatureTensor<T> {
    let conn = koszul_connection(spec);
    let n = spec.dim() as usize;
    let mut data = vec![T::zero(); n * n * n * n];
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            for k in 1..=n as u8 {
                for l in 1..=n as u8 {
                    let mut acc = T::zero();
                    for m in 1..=n as u8 {
                        acc = acc
                            + spec.bracket_coeff(i, j, m) * conn.gamma(m, k, l).clone()
                            - conn.gamma(j, k, m).clone() * conn.gamma(i, m, l).clone()
                            + conn.gamma(i, k, m).clone() * conn.gamma(j, m, l).clone();
                    }
                    let idx = ((((i - 1) as usize) * n + (j - 1) as usize) * n
                        + (k - 1) as usize)
                        * n
                        + (l - 1) as usize;
                    data[idx] = acc;
                }
            }
        }
    }
    CurvatureTensor { n, data }
}

impl<T: Field> CurvatureTensor<T> {
    pub fn dim(&self) -> u8 {
        self.n as u8
    }

    pub fn component(&self, i: u8, j: u8, k: u8, l: u8) -> &T {
        let idx = ((((i - 1) as usize) * self.n + (j - 1) as usize) * self.n
            + (k - 1) as usize)
            * self.n
            + (l - 1) as usize;
        &self.data[idx]
    }

    /// Ric[j][l] = Σ_i R[i][j][i][l].
    pub fn ricci(&self) -> Matrix<T> {
        let n = self.n as u8;
        let mut out = Matrix::zeros(self.n, self.n);
        for j in 1..=n {
            for l in 1..=n {
                let mut acc = T::zero();
                for i in 1..=n {
                    acc = acc + self.component(i, j, i, l).clone();
                }
                *out.get_mut((j - 1) as usize, (l - 1) as usize) = acc;
            }
        }
        out
    }

    pub fn scalars(&self) -> CurvatureScalars<T> {
        let ric = self.ricci();
        let n = self.n;
        let mut s = T::zero();
        for j in 0..n {
            s = s + ric.get(j, j).clone();
        }
        let mut ric_norm_sq = T::zero();
        for j in 0..n {
            for l in 0..n {
                let v = ric.get(j, l).clone();
                ric_norm_sq = ric_norm_sq + v.clone() * v;
            }
        }
        let mut r_norm_sq = T::zero();
        for v in &self.data {
            r_norm_sq = r_norm_sq + v.clone() * v.clone();
        }
        CurvatureScalars {
            s,
            ric_norm_sq,
            r_norm_sq,
            laplacian_s: T::zero(),
        }
    }

    /// Largest violation of the four classical symmetries and the first
    /// Bianchi identity; all five must be exactly zero.
    pub fn symmetry_residues(&self) -> Vec<(&'static str, bool)> {
        let n = self.n as u8;
        let mut skew_ij = true;
        let mut skew_kl = true;
        let mut pair = true;
        let mut bianchi = true;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let r = self.component(i, j, k, l).clone();
                        if r.clone() + self.component(j, i, k, l).clone() != T::zero() {
                            skew_ij = false;
                        }
                        if r.clone() + self.component(i, j, l, k).clone() != T::zero() {
                            skew_kl = false;
                        }
                        if r.clone() != self.component(k, l, i, j).clone() {
                            pair = false;
                        }
                        let cyc = r
                            + self.component(j, k, i, l).clone()
                            + self.component(k, i, j, l).clone();
                        if cyc != T::zero() {
                            bianchi = false;
                        }
                    }
                }
            }
        }
        vec![
            ("antisymmetry_ij", skew_ij),
            ("antisymmetry_kl", skew_kl),
            ("pair_symmetry", pair),
            ("first_bianchi", bianchi),
        ]
    }

    /// Applies J (rows = images) to one tensor slot.
    fn apply_j_slot(&self, j: &Matrix<T>, slot: usize) -> CurvatureTensor<T> {
        let n = self.n;
        let mut data = vec![T::zero(); n * n * n * n];
        let strides = [n * n * n, n * n, n, 1];
        for idx in 0..data.len() {
            let pos = [
                idx / strides[0],
                (idx / strides[1]) % n,
                (idx / strides[2]) % n,
                idx % n,
            ];
            let a = pos[slot];
            if j.get(a, 0).is_zero() && (1..n).all(|b| j.get(a, b).is_zero()) {
                continue;
            }
            let mut acc = T::zero();
            for b in 0..n {
                let c = j.get(a, b);
                if c.is_zero() {
                    continue;
                }
                let mut src = pos;
                src[slot] = b;
                let sidx = src[0] * strides[0] + src[1] * strides[1] + src[2] * strides[2] + src[3];
                acc = acc + c.clone() * self.data[sidx].clone();
            }
            data[idx] = acc;
        }
        CurvatureTensor { n, data }
    }

    /// Residue of the Hermitian curvature identity
    /// R(W,X,Y,Z) + R(JW,JX,JY,JZ) − (six mixed J-pair terms),
    /// evaluated on all frame 4-tuples. Zero exactly when the identity holds.
    pub fn gray_identity_residue(&self, j: &Matrix<T>) -> CurvatureTensor<T> {
        assert_eq!(j.nrows(), self.n);
        assert_eq!(j.ncols(), self.n);
        validate_j(j);
        let a0 = self.apply_j_slot(j, 0);
        let a1 = self.apply_j_slot(j, 1);
        let a2 = self.apply_j_slot(j, 2);
        let a01 = a0.apply_j_slot(j, 1);
        let a02 = a0.apply_j_slot(j, 2);
        let a03 = a0.apply_j_slot(j, 3);
        let a12 = a1.apply_j_slot(j, 2);
        let a13 = a1.apply_j_slot(j, 3);
        let a23 = a2.apply_j_slot(j, 3);
        let a0123 = a01.apply_j_slot(j, 2).apply_j_slot(j, 3);
        let mut data = Vec::with_capacity(self.data.len());
        for idx in 0..self.data.len() {
            let v = self.data[idx].clone() + a0123.data[idx].clone()
                - a01.data[idx].clone()
                - a02.data[idx].clone()
                - a03.data[idx].clone()
                - a12.data[idx].clone()
                - a13.data[idx].clone()
                - a23.data[idx].clone();
            data.push(v);
        }
        CurvatureTensor { n: self.n, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn einstein_report(&self) -> EinsteinReport<T> {
        let ric = self.ricci();
        let n = self.n;
        let lambda = ric.get(0, 0).clone();
        let mut einstein = true;
        let mut diagonal = true;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    if ric.get(i, i) != &lambda {
                        einstein = false;
                    }
                } else if !ric.get(i, j).is_zero() {
                    einstein = false;
                    diagonal = false;
                }
            }
        }
        let eigenvalues =
            diagonal.then(|| (0..n).map(|i| ric.get(i, i).clone()).collect());
        EinsteinReport {
            einstein,
            eigenvalues,
            ricci: ric,
        }
    }
}

impl CurvatureTensor<Scalar> {
    /// Largest |component| in the exact ordering of Q(√3).
    pub fn max_abs(&self) -> Scalar {
        let mut best = Scalar::zero();
        for v in &self.data {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
        best
    }
}

/// J² = −I and JᵀJ = I, exactly.
fn validate_j<T: Field>(j: &Matrix<T>) {
    let n = j.nrows();
    let minus_id = {
        let mut m = Matrix::<T>::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = -T::one();
        }
        m
    };
    assert!(j.mul(j) == minus_id, "J\u{b2} \u{2260} \u{2212}I");
    assert!(
        j.transpose().mul(j) == Matrix::identity(n),
        "J is not orthogonal"
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::forms::signed_monomials;
    use crate::lie::LieAlgebraSpec;
    use crate::scalar::Scalar;

    type Spec = LieAlgebraSpec<Scalar>;

    fn su2() -> Spec {
        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 ⇒ de1 = −e23, de2 = e13, de3 = −e12
        let diffs = vec![
            signed_monomials(3, &[(-1, &[2, 3])]),
            signed_monomials(3, &[(1, &[1, 3])]),
            signed_monomials(3, &[(-1, &[1, 2])]),
        ];
        Spec::new(3, diffs).unwrap()
    }

    #[test]
    fn abelian_is_flat() {
        let r = curvature(&Spec::abelian(4));
        assert!(r.is_zero());
        let s = r.scalars();
        assert!(s.s.is_zero() && s.ric_norm_sq.is_zero() && s.r_norm_sq.is_zero());
        assert!(r.einstein_report().einstein);
    }

    #[test]
    fn heisenberg_connection_and_ricci() {
        let spec = builtins::heisenberg3();
        let conn = koszul_connection(&spec);
        // Koszul gives gamma[1][2][3] = −1/2 for de3 = e12
        assert_eq!(conn.gamma(1, 2, 3), &Scalar::rat(-1, 2));
        // metric compatibility: gamma[i][j][k] = −gamma[i][k][j]
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                for k in 1..=3u8 {
                    assert_eq!(
                        conn.gamma(i, j, k).clone() + conn.gamma(i, k, j).clone(),
                        Scalar::zero()
                    );
                }
            }
        }
        // zero torsion: antisymmetrized table equals bracket coefficients
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                for k in 1..=3u8 {
                    assert_eq!(
                        conn.gamma(i, j, k).clone() - conn.gamma(j, i, k).clone(),
                        spec.bracket_coeff(i, j, k)
                    );
                }
            }
        }
        let r = curvature(&spec);
        let rep = r.einstein_report();
        assert!(!rep.einstein);
        assert_eq!(
            rep.eigenvalues.unwrap(),
            vec![Scalar::rat(-1, 2), Scalar::rat(-1, 2), Scalar::rat(1, 2)]
        );
        let s = r.scalars();
        assert_eq!(s.s, Scalar::rat(-1, 2));
        assert_eq!(s.ric_norm_sq, Scalar::rat(3, 4));
        assert!(s.laplacian_s.is_zero());
    }

    #[test]
    fn sphere_sign_oracle() {
        // bi-invariant SU(2): sectional curvature 1/4, scalar curvature 3/2
        let r = curvature(&su2());
        assert_eq!(r.component(1, 2, 1, 2), &Scalar::rat(1, 4));
        let s = r.scalars();
        assert_eq!(s.s, Scalar::rat(3, 2));
        let rep = r.einstein_report();
        assert!(rep.einstein);
        assert_eq!(rep.eigenvalues.unwrap()[0], Scalar::rat(1, 2));
    }

    #[test]
    fn symmetries_hold_exactly() {
        for spec in [
            builtins::m6(),
            builtins::iwasawa(),
            builtins::heisenberg3(),
            su2(),
        ] {
            let r = curvature(&spec);
            for (name, ok) in r.symmetry_residues() {
                assert!(ok, "{name} fails");
            }
        }
    }

    #[test]
    fn scalars_invariant_under_signed_permutations() {
        let spec = builtins::m6();
        let base = curvature(&spec).scalars();
        // a couple of signed permutation matrices (exact orthogonal)
        let perms: Vec<Vec<(usize, i64)>> = vec![
            vec![(1, 1), (0, -1), (2, 1), (3, 1), (4, 1), (5, 1)], // swap e1,e2 with a sign
            vec![(5, 1), (4, 1), (3, -1), (2, 1), (1, 1), (0, -1)], // reversal with signs
        ];
        for p in perms {
            let mut m = Matrix::<Scalar>::zeros(6, 6);
            for (row, (col, sign)) in p.into_iter().enumerate() {
                *m.get_mut(row, col) = Scalar::int(sign);
            }
            let rotated = spec.change_coframe(&m).unwrap();
            let s = curvature(&rotated).scalars();
            assert_eq!(s.s, base.s);
            assert_eq!(s.ric_norm_sq, base.ric_norm_sq);
            assert_eq!(s.r_norm_sq, base.r_norm_sq);
        }
    }

    #[test]
    fn gray_identity_on_iwasawa() {
        // abelian: R = 0, so any J gives a zero residue
        let flat = curvature(&Spec::abelian(6));
        let j0 = Matrix::from_rows(builtins::standard_j(6));
        assert!(flat.gray_identity_residue(&j0).is_zero());

        // Iwasawa with the integrable J₀: the identity must hold exactly
        let r = curvature(&builtins::iwasawa());
        assert!(r.gray_identity_residue(&j0).is_zero());

        // the almost-Kähler J is not integrable; record a nonzero residue
        let jak = Matrix::from_rows(builtins::iwasawa_almost_kahler_j());
        let residue = r.gray_identity_residue(&jak);
        assert!(!residue.is_zero());
        assert!(residue.max_abs() > Scalar::zero());
    }

    #[test]
    fn m6_einstein_verdict() {
        let r = curvature(&builtins::m6());
        let rep = r.einstein_report();
        // exact verdict with an exact eigenvalue list
        assert!(!rep.einstein);
        let eig = rep.eigenvalues.expect("Ricci is diagonal for @m6");
        assert_eq!(eig.len(), 6);
        let s: Scalar = eig
            .iter()
            .fold(Scalar::zero(), |acc, v| acc + v.clone());
        assert_eq!(s, r.scalars().s);
    }
}
