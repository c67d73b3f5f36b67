//! Volumes of Euclidean balls and slabs, small-radius expansions of
//! geodesic-ball volumes, and the tube volume around projective
//! hypersurfaces.
//!
//! Quadrature and root-finding tolerances (1e−9 / 1e−10) sit well below
//! every consumer's tolerance so that reported errors are model error,
//! not numerics.

use statrs::function::gamma::ln_gamma;

use crate::quad::adaptive_simpson;

/// Volume of the radius-r ball in ℝ^d: (π r²)^{d/2} / Γ(d/2 + 1).
pub fn ball_volume(d: u32, r: f64) -> f64 {
    assert!(d >= 1);
    assert!(r >= 0.0);
    if r == 0.0 {
        return 0.0;
    }
    let n = d as f64 / 2.0;
    (n * (std::f64::consts::PI * r * r).ln() - ln_gamma(n + 1.0)).exp()
}

/// The radius r_d with V(r_d) = 1 by bisection, driven until the volume
/// itself is within 1e−10 of 1 (which also pins the radius to better
/// than 1e−10, since dV/dr = d/r_d ≥ 2 at the root).
pub fn unit_volume_radius(d: u32) -> f64 {
    assert!(d >= 1);
    let mut hi = 1.0f64;
    while ball_volume(d, hi) < 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = ball_volume(d, mid) - 1.0;
        if v.abs() <= 1e-10 || hi - lo <= f64::EPSILON * mid {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Volume of B(r_d) ∩ (ℝ^{d−1} × [−w, w]); w is clamped to r_d.
pub fn slab_volume(d: u32, half_width: f64) -> f64 {
    assert!(d >= 2);
    assert!(half_width >= 0.0);
    let r = unit_volume_radius(d);
    let w = half_width.min(r);
    if w == 0.0 {
        return 0.0;
    }
    let cross_section = |t: f64| {
        let radius_sq = (r * r - t * t).max(0.0);
        ball_volume(d - 1, radius_sq.sqrt())
    };
    // symmetric integrand
    2.0 * adaptive_simpson(&cross_section, 0.0, w, 1e-9)
}

/// Curvature data feeding the r² and r⁴ coefficients. `n` is half the
/// dimension and may be half-integral.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ExpansionInput {
    pub n: f64,
    pub s: f64,
    pub ric_norm_sq: f64,
    pub r_norm_sq: f64,
    pub laplacian_s: f64,
}

impl ExpansionInput {
    pub fn flat(n: f64) -> Self {
        ExpansionInput {
            n,
            s: 0.0,
            ric_norm_sq: 0.0,
            r_norm_sq: 0.0,
            laplacian_s: 0.0,
        }
    }

    /// Constant-curvature data for the unit round sphere S^d.
    pub fn round_sphere(d: u32) -> Self {
        let df = d as f64;
        ExpansionInput {
            n: df / 2.0,
            s: df * (df - 1.0),
            ric_norm_sq: df * (df - 1.0) * (df - 1.0),
            r_norm_sq: 2.0 * df * (df - 1.0),
            laplacian_s: 0.0,
        }
    }
}

/// The r² coefficient −s/(12(n+1)). The literature sometimes prints
/// −(1/3)s/(n+1) for the same normalization; `c2_printed_variant` keeps
/// that value visible next to the one the sphere oracle validates.
pub fn c2(input: &ExpansionInput) -> f64 {
    -input.s / (12.0 * (input.n + 1.0))
}

pub fn c2_printed_variant(input: &ExpansionInput) -> f64 {
    -input.s / (3.0 * (input.n + 1.0))
}

/// The r⁴ coefficient (8‖Ric‖² − 3‖R‖² + 5s² − 18Δs)/(1440(n+1)(n+2)).
pub fn c4(input: &ExpansionInput) -> f64 {
    let numerator = 8.0 * input.ric_norm_sq - 3.0 * input.r_norm_sq + 5.0 * input.s * input.s
        - 18.0 * input.laplacian_s;
    numerator / (1440.0 * (input.n + 1.0) * (input.n + 2.0))
}

/// Flat to order 2k in the expansion: k = 1 checks c₂, k = 2 also c₄.
pub fn is_flat_to_order(input: &ExpansionInput, k: u32) -> bool {
    assert!((1..=2).contains(&k));
    let eps = 1e-12;
    let c2_zero = c2(input).abs() < eps;
    match k {
        1 => c2_zero,
        _ => c2_zero && c4(input).abs() < eps,
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct FittedExpansion {
    pub c2: f64,
    pub c4: f64,
    /// RMS residual of the least-squares fit; large values flag
    /// contamination from the r⁶ term (r_max too large).
    pub residual_rms: f64,
}

/// Independent oracle: exact V(r) on the unit round S^d via
/// vol(S^{d−1})·∫₀^r sin^{d−1}t dt, then a least-squares fit of
/// V(r)/((πr²)^n/n!) − 1 against (r², r⁴) on (0, r_max].
pub fn sphere_expansion_oracle(d: u32, r_max: f64) -> FittedExpansion {
    assert!((2..=10).contains(&d));
    assert!(r_max > 0.0 && r_max <= 0.2);
    let df = d as f64;
    // vol(S^{d-1}) = 2π^{d/2}/Γ(d/2)
    let sphere_area = (df / 2.0 * std::f64::consts::PI.ln() - ln_gamma(df / 2.0)).exp() * 2.0;
    let integrand = |t: f64| t.sin().powi(d as i32 - 1);

    let npts = 160;
    let mut sum = [0.0f64; 5]; // Σx², Σx³, Σx⁴ packed as moments of x = r²
    let mut rhs = [0.0f64; 2];
    let mut samples = Vec::with_capacity(npts);
    let mut acc_integral = 0.0;
    let mut prev_r = 0.0;
    for i in 1..=npts {
        let r = r_max * i as f64 / npts as f64;
        acc_integral += adaptive_simpson(&integrand, prev_r, r, 1e-15);
        prev_r = r;
        let volume = sphere_area * acc_integral;
        let euclid = ball_volume(d, r);
        let y = volume / euclid - 1.0;
        let x = r * r;
        samples.push((x, y));
        sum[0] += x * x;
        sum[1] += x * x * x;
        sum[2] += x * x * x * x;
        rhs[0] += x * y;
        rhs[1] += x * x * y;
    }
    // normal equations for y ≈ c2·x + c4·x²
    let det = sum[0] * sum[2] - sum[1] * sum[1];
    let c2_hat = (rhs[0] * sum[2] - rhs[1] * sum[1]) / det;
    let c4_hat = (sum[0] * rhs[1] - sum[1] * rhs[0]) / det;
    let mut ss = 0.0;
    for (x, y) in &samples {
        let e = y - (c2_hat * x + c4_hat * x * x);
        ss += e * e;
    }
    FittedExpansion {
        c2: c2_hat,
        c4: c4_hat,
        residual_rms: (ss / npts as f64).sqrt(),
    }
}

/// Volume of a radius-r tube around a degree-k hypersurface in CP^n:
/// π^n/n!·(1 − (1 − k·sin²r)^n). No smallness check is imposed on r.
pub fn tube_volume_cpn(n: u32, k: u32, r: f64) -> f64 {
    assert!(n >= 1 && k >= 1);
    assert!(r >= 0.0);
    let nf = n as f64;
    let total = (nf * std::f64::consts::PI.ln() - ln_gamma(nf + 1.0)).exp();
    let s = r.sin();
    total * (1.0 - (1.0 - k as f64 * s * s).powi(n as i32))
}
