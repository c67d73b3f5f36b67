//! Parametric surfaces, their first fundamental form and Christoffel
//! symbols, kept symbolic until evaluation.

use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive};

use crate::expr::{parse_components, Expr, ExprError, Var};

#[derive(Clone, PartialEq, Debug)]
pub struct SurfacePatch {
    pub components: [Expr; 3],
    /// ∂x/∂u and ∂x/∂v, componentwise.
    pub du: [Expr; 3],
    pub dv: [Expr; 3],
    source: String,
}

impl SurfacePatch {
    pub fn new(components: [Expr; 3], source: impl Into<String>) -> Self {
        let du = [
            components[0].diff(Var::U),
            components[1].diff(Var::U),
            components[2].diff(Var::U),
        ];
        let dv = [
            components[0].diff(Var::V),
            components[1].diff(Var::V),
            components[2].diff(Var::V),
        ];
        SurfacePatch {
            components,
            du,
            dv,
            source: source.into(),
        }
    }

    /// Parses `(x(u,v), y(u,v), z(u,v))`.
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        Ok(SurfacePatch::new(parse_components(text)?, text.trim()))
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn embed<F: Float + FloatConst + FromPrimitive>(&self, u: F, v: F) -> [F; 3] {
        [
            self.components[0].eval(u, v),
            self.components[1].eval(u, v),
            self.components[2].eval(u, v),
        ]
    }
}

/// The torus of revolution used by the default run.
pub fn torus() -> SurfacePatch {
    SurfacePatch::parse("((2+cos(v))*cos(u), (2+cos(v))*sin(u), sin(v))").unwrap()
}

pub fn plane() -> SurfacePatch {
    SurfacePatch::parse("(u, v, 0)").unwrap()
}

/// Unit sphere with u the longitude and v the latitude.
pub fn unit_sphere() -> SurfacePatch {
    SurfacePatch::parse("(cos(u)*cos(v), sin(u)*cos(v), sin(v))").unwrap()
}

#[derive(Clone, PartialEq, Debug)]
pub struct DegenerateMetric {
    pub u: f64,
    pub v: f64,
}

impl fmt::Display for DegenerateMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "metric degenerates at (u, v) = ({}, {}): EG \u{2212} F\u{b2} \u{2264} 0",
            self.u, self.v
        )
    }
}

impl std::error::Error for DegenerateMetric {}

/// First fundamental form and Christoffel symbols, symbolic.
/// `christoffel[k][i][j]` is Γ^{k+1}_{(i+1)(j+1)}, symmetric in (i, j).
#[derive(Clone, PartialEq, Debug)]
pub struct MetricData {
    pub e: Expr,
    pub f: Expr,
    pub g: Expr,
    pub christoffel: [[[Expr; 2]; 2]; 2],
    /// (E_u, E_v, F_u, F_v, G_u, G_v), kept for fast pointwise assembly.
    partials: [Expr; 6],
}

impl MetricData {
    pub fn new(surface: &SurfacePatch) -> Self {
        let dot = |a: &[Expr; 3], b: &[Expr; 3]| {
            let mut acc = Expr::int(0);
            for (x, y) in a.iter().zip(b) {
                acc = Expr::add(acc, Expr::mul(x.clone(), y.clone()));
            }
            acc
        };
        let e = dot(&surface.du, &surface.du);
        let f = dot(&surface.du, &surface.dv);
        let g = dot(&surface.dv, &surface.dv);

        let e_u = e.diff(Var::U);
        let e_v = e.diff(Var::V);
        let f_u = f.diff(Var::U);
        let f_v = f.diff(Var::V);
        let g_u = g.diff(Var::U);
        let g_v = g.diff(Var::V);

        let two = || Expr::int(2);
        // the six numerators, then division by 2(EG − F²)
        let ga111 = Expr::add(
            Expr::sub(
                Expr::mul(e_v.clone(), f.clone()),
                Expr::mul(Expr::mul(two(), f_u.clone()), f.clone()),
            ),
            Expr::mul(e_u.clone(), g.clone()),
        );
        let ga222 = Expr::add(
            Expr::sub(
                Expr::mul(g_v.clone(), e.clone()),
                Expr::mul(Expr::mul(two(), f_v.clone()), f.clone()),
            ),
            Expr::mul(g_u.clone(), f.clone()),
        );
        let ga211 = Expr::sub(
            Expr::sub(
                Expr::mul(Expr::mul(two(), f_u.clone()), e.clone()),
                Expr::mul(e_v.clone(), e.clone()),
            ),
            Expr::mul(e_u.clone(), f.clone()),
        );
        let ga122 = Expr::sub(
            Expr::sub(
                Expr::mul(Expr::mul(two(), f_v.clone()), g.clone()),
                Expr::mul(g_v.clone(), f.clone()),
            ),
            Expr::mul(g_u.clone(), g.clone()),
        );
        let ga112 = Expr::sub(
            Expr::mul(e_v.clone(), g.clone()),
            Expr::mul(g_u.clone(), f.clone()),
        );
        let ga212 = Expr::sub(
            Expr::mul(g_u.clone(), e.clone()),
            Expr::mul(e_v.clone(), f.clone()),
        );

        let det = Expr::sub(
            Expr::mul(e.clone(), g.clone()),
            Expr::pow(f.clone(), 2),
        );
        let denom = Expr::mul(two(), det);
        let over = |num: Expr| Expr::div(num, denom.clone());

        let g111 = over(ga111);
        let g112 = over(ga112);
        let g122 = over(ga122);
        let g211 = over(ga211);
        let g212 = over(ga212);
        let g222 = over(ga222);

        let christoffel = [
            [
                [g111.clone(), g112.clone()],
                [g112.clone(), g122.clone()],
            ],
            [
                [g211.clone(), g212.clone()],
                [g212.clone(), g222.clone()],
            ],
        ];
        MetricData {
            e,
            f,
            g,
            christoffel,
            partials: [e_u, e_v, f_u, f_v, g_u, g_v],
        }
    }

    /// (E, F, G) at a point, after the regularity check.
    pub fn coefficients_at<F: Float + FloatConst + FromPrimitive>(
        &self,
        u: F,
        v: F,
    ) -> Result<[F; 3], DegenerateMetric> {
        let e = self.e.eval(u, v);
        let f = self.f.eval(u, v);
        let g = self.g.eval(u, v);
        let det = e * g - f * f;
        if !(e > F::zero() && g > F::zero() && det > F::zero()) {
            return Err(DegenerateMetric {
                u: u.to_f64().unwrap_or(f64::NAN),
                v: v.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok([e, f, g])
    }

    /// All six Γ values at a point: [k][i][j]. Assembled numerically from
    /// E, F, G and their partials; identical to evaluating the symbolic
    /// `christoffel` entries, but each base expression is walked once.
    pub fn christoffel_at<F: Float + FloatConst + FromPrimitive>(
        &self,
        u: F,
        v: F,
    ) -> Result<[[[F; 2]; 2]; 2], DegenerateMetric> {
        let [e, f, g] = self.coefficients_at(u, v)?;
        let e_u = self.partials[0].eval(u, v);
        let e_v = self.partials[1].eval(u, v);
        let f_u = self.partials[2].eval(u, v);
        let f_v = self.partials[3].eval(u, v);
        let g_u = self.partials[4].eval(u, v);
        let g_v = self.partials[5].eval(u, v);
        let two = F::one() + F::one();
        let w = two * (e * g - f * f);
        let g111 = (e_v * f - two * f_u * f + e_u * g) / w;
        let g112 = (e_v * g - g_u * f) / w;
        let g122 = (two * f_v * g - g_v * f - g_u * g) / w;
        let g211 = (two * f_u * e - e_v * e - e_u * f) / w;
        let g212 = (g_u * e - e_v * f) / w;
        let g222 = (g_v * e - two * f_v * f + g_u * f) / w;
        Ok([[[g111, g112], [g112, g122]], [[g211, g212], [g212, g222]]])
    }

    /// g-speed of a tangent vector (p, q) at (u, v).
    pub fn speed<F: Float + FloatConst + FromPrimitive>(
        &self,
        u: F,
        v: F,
        p: F,
        q: F,
    ) -> F {
        let e = self.e.eval(u, v);
        let f = self.f.eval(u, v);
        let g = self.g.eval(u, v);
        (e * p * p + (f + f) * p * q + g * q * q).sqrt()
    }
}
