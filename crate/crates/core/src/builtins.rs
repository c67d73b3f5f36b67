//! The named algebras and almost-complex matrices every tool accepts
//! without external files.

use crate::forms::signed_monomials;
use crate::lie::LieAlgebraSpec;
use crate::scalar::Scalar;

/// dim 6, de⁴ = e¹⁵, de⁶ = e¹³, everything else closed.
pub fn m6() -> LieAlgebraSpec<Scalar> {
    let diffs = vec![
        zero6(),
        zero6(),
        zero6(),
        signed_monomials(6, &[(1, &[1, 5])]),
        zero6(),
        signed_monomials(6, &[(1, &[1, 3])]),
    ];
    LieAlgebraSpec::new(6, diffs).expect("built-in algebra is valid")
}

/// The Iwasawa algebra: de⁵ = −e¹³ + e²⁴, de⁶ = −e¹⁴ − e²³.
pub fn iwasawa() -> LieAlgebraSpec<Scalar> {
    let diffs = vec![
        zero6(),
        zero6(),
        zero6(),
        zero6(),
        signed_monomials(6, &[(-1, &[1, 3]), (1, &[2, 4])]),
        signed_monomials(6, &[(-1, &[1, 4]), (-1, &[2, 3])]),
    ];
    LieAlgebraSpec::new(6, diffs).expect("built-in algebra is valid")
}

/// dim 3 Heisenberg: de³ = e¹².
pub fn heisenberg3() -> LieAlgebraSpec<Scalar> {
    let diffs = vec![
        crate::forms::KForm::zero(3, 2),
        crate::forms::KForm::zero(3, 2),
        signed_monomials(3, &[(1, &[1, 2])]),
    ];
    LieAlgebraSpec::new(3, diffs).expect("built-in algebra is valid")
}

pub fn abelian(dim: u8) -> LieAlgebraSpec<Scalar> {
    LieAlgebraSpec::abelian(dim)
}

/// Resolves `@name` references: `@m6`, `@iwasawa`, `@heisenberg3`,
/// `@abelian:N`.
pub fn algebra_by_name(name: &str) -> Option<LieAlgebraSpec<Scalar>> {
    match name {
        "m6" => Some(m6()),
        "iwasawa" => Some(iwasawa()),
        "heisenberg3" => Some(heisenberg3()),
        _ => {
            let n: u8 = name.strip_prefix("abelian:")?.parse().ok()?;
            (n > 0).then(|| abelian(n))
        }
    }
}

/// The standard block almost-complex structure Je₁ = e₂, …, Je_{2n−1} = e_{2n}.
pub fn standard_j(dim: u8) -> Vec<Vec<Scalar>> {
    assert!(dim % 2 == 0);
    let n = dim as usize;
    let mut m = vec![vec![Scalar::int(0); n]; n];
    for p in 0..n / 2 {
        m[2 * p][2 * p + 1] = Scalar::int(1);
        m[2 * p + 1][2 * p] = Scalar::int(-1);
    }
    m
}

/// The almost-Kähler structure on the Iwasawa algebra:
/// Je₁ = e₆, Je₂ = e₅, Je₃ = e₄ (fundamental form e¹⁶ + e²⁵ + e³⁴).
pub fn iwasawa_almost_kahler_j() -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![Scalar::int(0); 6]; 6];
    for (a, b) in [(1u8, 6u8), (2, 5), (3, 4)] {
        m[(a - 1) as usize][(b - 1) as usize] = Scalar::int(1);
        m[(b - 1) as usize][(a - 1) as usize] = Scalar::int(-1);
    }
    m
}

/// Resolves `@name` J-matrices: `@standard:N` (N even), `@standard`
/// (six-dimensional) and `@iwasawa-ak`.
pub fn j_matrix_by_name(name: &str) -> Option<Vec<Vec<Scalar>>> {
    match name {
        "standard" => Some(standard_j(6)),
        "iwasawa-ak" => Some(iwasawa_almost_kahler_j()),
        _ => {
            let n: u8 = name.strip_prefix("standard:")?.parse().ok()?;
            (n > 0 && n % 2 == 0).then(|| standard_j(n))
        }
    }
}

fn zero6() -> crate::forms::KForm<Scalar> {
    crate::forms::KForm::zero(6, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        assert_eq!(algebra_by_name("m6").unwrap(), m6());
        assert_eq!(algebra_by_name("abelian:6").unwrap().dim(), 6);
        assert!(algebra_by_name("abelian:0").is_none());
        assert!(algebra_by_name("nope").is_none());
        assert!(j_matrix_by_name("standard").is_some());
        assert!(j_matrix_by_name("standard:5").is_none());
    }
}
