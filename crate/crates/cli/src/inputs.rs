//! Input resolution: `@name` references, spec files, matrix files,
//! inline surfaces and form literals.

use holotorsion_core::{builtins, literal, Form, LieSpec, Scalar};
use holotorsion_labs::surface::SurfacePatch;

use crate::CliError;

pub fn load_algebra(reference: &str) -> Result<LieSpec, CliError> {
    if let Some(name) = reference.strip_prefix('@') {
        return builtins::algebra_by_name(name).ok_or_else(|| {
            CliError::new(
                "usage",
                format!(
                    "unknown built-in algebra `@{name}`; have @m6, @iwasawa, @heisenberg3, @abelian:N"
                ),
            )
        });
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| CliError::new("io", format!("reading {reference}: {e}")))?;
    literal::parse_algebra(&text)
        .map_err(|e| CliError::new("parse", format!("{reference}: {e}")))
}

pub fn load_j_matrix(reference: &str) -> Result<Vec<Vec<Scalar>>, CliError> {
    if let Some(name) = reference.strip_prefix('@') {
        return builtins::j_matrix_by_name(name).ok_or_else(|| {
            CliError::new(
                "usage",
                format!(
                    "unknown built-in J `@{name}`; have @standard, @standard:N, @iwasawa-ak"
                ),
            )
        });
    }
    let text = std::fs::read_to_string(reference)
        .map_err(|e| CliError::new("io", format!("reading {reference}: {e}")))?;
    literal::parse_matrix(&text)
        .map_err(|e| CliError::new("parse", format!("{reference}: {e}")))
}

pub fn load_three_form(reference: &str, dim: u8) -> Result<Form, CliError> {
    if reference == "@standard" {
        return Ok(holotorsion_core::structures::g2_three_form());
    }
    let text = if reference.contains('*') || reference.contains("e{") {
        reference.to_string()
    } else {
        std::fs::read_to_string(reference)
            .map_err(|e| CliError::new("io", format!("reading {reference}: {e}")))?
    };
    literal::parse_form(text.trim(), dim)
        .map_err(|e| CliError::new("parse", e.to_string()))
}

pub fn load_surface(reference: &str) -> Result<SurfacePatch, CliError> {
    let inline = match reference {
        "@torus" => return Ok(holotorsion_labs::surface::torus()),
        "@plane" => return Ok(holotorsion_labs::surface::plane()),
        "@sphere" => return Ok(holotorsion_labs::surface::unit_sphere()),
        text if text.trim_start().starts_with('(') => text.to_string(),
        path => std::fs::read_to_string(path)
            .map_err(|e| CliError::new("io", format!("reading {path}: {e}")))?,
    };
    SurfacePatch::parse(inline.trim())
        .map_err(|e| CliError::new("parse", e.to_string()))
}

pub fn parse_origin(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::new("usage", "--origin wants `a,b`"));
    }
    let parse = |p: &str| -> Result<f64, CliError> {
        let t = p.trim();
        // allow pi/2-style fractions of π for convenience
        if let Some(rest) = t.strip_prefix("pi/") {
            let d: f64 = rest
                .parse()
                .map_err(|_| CliError::new("usage", format!("bad origin component `{t}`")))?;
            return Ok(std::f64::consts::PI / d);
        }
        if t == "pi" {
            return Ok(std::f64::consts::PI);
        }
        t.parse()
            .map_err(|_| CliError::new("usage", format!("bad origin component `{t}`")))
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

/// HOLOTORSION_SEED fixes the randomized-point seed; unset means 0.
pub fn seed_from_env() -> u64 {
    std::env::var("HOLOTORSION_SEED")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}
