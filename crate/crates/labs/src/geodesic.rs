//! Geodesic shooting on a parametric surface.
//!
//! The second-order system u'' + e₁ = 0, v'' + e₂ = 0 with
//! e_j = Γ^j₁₁p² + 2Γ^j₁₂pq + Γ^j₂₂q² is integrated as a first-order
//! system in (u, v, p, q) with classical fixed-step RK4. Launch data is
//! (p, q) = (cos θ, sin θ); the paper's "radius" is therefore the ODE
//! parameter, which equals arclength only where the metric looks
//! Euclidean at the center.

use num_traits::{Float, FloatConst, FromPrimitive};

use crate::surface::{DegenerateMetric, MetricData, SurfacePatch};

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct GeodesicSample<F> {
    /// ODE parameter from the launch point.
    pub s: F,
    pub u: F,
    pub v: F,
    /// u' and v'.
    pub p: F,
    pub q: F,
    /// Embedded position.
    pub xyz: [F; 3],
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polyline<F> {
    pub samples: Vec<GeodesicSample<F>>,
    /// Set when integration stopped early on a metric degeneracy.
    pub truncated: Option<DegenerateMetric>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Circle<F> {
    /// The common ODE-parameter value of the joined points.
    pub parameter: F,
    pub points: Vec<[F; 3]>,
    pub uv: Vec<[F; 2]>,
    /// All spray rays reached this parameter.
    pub complete: bool,
    /// Bounding boxes of non-adjacent segments overlap somewhere, a cheap
    /// signal that the circle has started to self-intersect past a
    /// conjugate point.
    pub self_intersection_hint: bool,
}

#[derive(Clone, Copy, PartialEq, Debug)]
struct State<F> {
    u: F,
    v: F,
    p: F,
    q: F,
}

fn accel<F: Float + FloatConst + FromPrimitive>(
    metric: &MetricData,
    st: &State<F>,
) -> Result<[F; 2], DegenerateMetric> {
    let gamma = metric.christoffel_at(st.u, st.v)?;
    let two = F::one() + F::one();
    let mut e = [F::zero(); 2];
    for (j, out) in e.iter_mut().enumerate() {
        *out = gamma[j][0][0] * st.p * st.p
            + two * gamma[j][0][1] * st.p * st.q
            + gamma[j][1][1] * st.q * st.q;
    }
    Ok(e)
}

fn derivative<F: Float + FloatConst + FromPrimitive>(
    metric: &MetricData,
    st: &State<F>,
) -> Result<State<F>, DegenerateMetric> {
    let e = accel(metric, st)?;
    Ok(State {
        u: st.p,
        v: st.q,
        p: -e[0],
        q: -e[1],
    })
}

fn step_rk4<F: Float + FloatConst + FromPrimitive>(
    metric: &MetricData,
    st: &State<F>,
    h: F,
) -> Result<State<F>, DegenerateMetric> {
    let half = h / (F::one() + F::one());
    let advance = |base: &State<F>, k: &State<F>, dt: F| State {
        u: base.u + k.u * dt,
        v: base.v + k.v * dt,
        p: base.p + k.p * dt,
        q: base.q + k.q * dt,
    };
    let k1 = derivative(metric, st)?;
    let k2 = derivative(metric, &advance(st, &k1, half))?;
    let k3 = derivative(metric, &advance(st, &k2, half))?;
    let k4 = derivative(metric, &advance(st, &k3, h))?;
    let six = F::from_i64(6).unwrap();
    Ok(State {
        u: st.u + (k1.u + (k2.u + k3.u) * (F::one() + F::one()) + k4.u) * h / six,
        v: st.v + (k1.v + (k2.v + k3.v) * (F::one() + F::one()) + k4.v) * h / six,
        p: st.p + (k1.p + (k2.p + k3.p) * (F::one() + F::one()) + k4.p) * h / six,
        q: st.q + (k1.q + (k2.q + k3.q) * (F::one() + F::one()) + k4.q) * h / six,
    })
}

/// Integrates a single geodesic from (a, b) with launch angle θ up to ODE
/// parameter r, sampling every step. A degenerate metric along the way
/// truncates the path rather than failing the run.
pub fn shoot<F: Float + FloatConst + FromPrimitive>(
    surface: &SurfacePatch,
    metric: &MetricData,
    a: F,
    b: F,
    theta: F,
    r: F,
    step: F,
) -> Polyline<F> {
    assert!(r > F::zero() && step > F::zero());
    let mut st = State {
        u: a,
        v: b,
        p: theta.cos(),
        q: theta.sin(),
    };
    let tiny = step * F::from_f64(1e-9).unwrap();
    let full_steps = ((r + tiny) / step).floor().to_usize().unwrap_or(0);
    let remainder = r - step * F::from_usize(full_steps).unwrap();
    let final_partial = remainder > tiny;
    let mut samples = Vec::with_capacity(full_steps + 2);
    let push = |samples: &mut Vec<GeodesicSample<F>>, s: F, st: &State<F>| {
        samples.push(GeodesicSample {
            s,
            u: st.u,
            v: st.v,
            p: st.p,
            q: st.q,
            xyz: surface.embed(st.u, st.v),
        });
    };
    push(&mut samples, F::zero(), &st);
    let mut truncated = None;
    for i in 1..=full_steps {
        match step_rk4(metric, &st, step) {
            Ok(next) => {
                st = next;
                push(&mut samples, step * F::from_usize(i).unwrap(), &st);
            }
            Err(d) => {
                truncated = Some(d);
                break;
            }
        }
    }
    // land exactly on the requested parameter
    if truncated.is_none() && final_partial {
        match step_rk4(metric, &st, remainder) {
            Ok(next) => {
                st = next;
                push(&mut samples, r, &st);
            }
            Err(d) => truncated = Some(d),
        }
    }
    Polyline { samples, truncated }
}

/// m+1 geodesics at launch angles θ = 0, 2π/m, …, 2π.
pub fn spray<F: Float + FloatConst + FromPrimitive>(
    surface: &SurfacePatch,
    metric: &MetricData,
    a: F,
    b: F,
    m: usize,
    r: F,
    step: F,
) -> Vec<Polyline<F>> {
    assert!(m >= 1);
    let two_pi = F::PI() + F::PI();
    (0..=m)
        .map(|i| {
            let theta = two_pi * F::from_usize(i).unwrap() / F::from_usize(m).unwrap();
            shoot(surface, metric, a, b, theta, r, step)
        })
        .collect()
}

/// Joins spray points of equal parameter into closed polylines, one per
/// radius t = spacing, 2·spacing, … ≤ r.
pub fn circles<F: Float + FloatConst + FromPrimitive>(
    rays: &[Polyline<F>],
    r: F,
    spacing: F,
    step: F,
) -> Vec<Circle<F>> {
    assert!(spacing > F::zero());
    let mut out = Vec::new();
    let mut t = spacing;
    let eps = step / (F::one() + F::one());
    while t <= r + eps {
        let idx = (t / step).round().to_usize().unwrap_or(usize::MAX);
        let mut points = Vec::with_capacity(rays.len());
        let mut uv = Vec::with_capacity(rays.len());
        let mut complete = true;
        for ray in rays {
            match ray.samples.get(idx) {
                Some(sample) => {
                    points.push(sample.xyz);
                    uv.push([sample.u, sample.v]);
                }
                None => complete = false,
            }
        }
        let self_intersection_hint = segments_bbox_overlap(&points);
        out.push(Circle {
            parameter: t,
            points,
            uv,
            complete,
            self_intersection_hint,
        });
        t = t + spacing;
    }
    out
}

/// True when bounding boxes of two non-adjacent segments of the closed
/// polyline overlap.
fn segments_bbox_overlap<F: Float>(points: &[[F; 3]]) -> bool {
    let n = points.len();
    if n < 4 {
        return false;
    }
    let seg = |i: usize| -> ([F; 3], [F; 3]) {
        let a = points[i];
        let b = points[(i + 1) % n];
        let lo = [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])];
        let hi = [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])];
        (lo, hi)
    };
    for i in 0..n {
        let (lo_i, hi_i) = seg(i);
        for j in (i + 2)..n {
            // adjacent segments (sharing an endpoint) always touch
            if i == 0 && j == n - 1 {
                continue;
            }
            let (lo_j, hi_j) = seg(j);
            let overlap = (0..3).all(|k| lo_i[k] <= hi_j[k] && lo_j[k] <= hi_i[k]);
            if overlap {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{plane, torus, unit_sphere};

    #[test]
    fn plane_geodesics_are_straight_lines() {
        let s = plane();
        let m = MetricData::new(&s);
        let line = shoot(&s, &m, 0.0f64, 0.0, 0.0, 2.0, 0.01);
        assert!(line.truncated.is_none());
        for sample in &line.samples {
            assert!((sample.u - sample.s).abs() < 1e-12);
            assert!(sample.v.abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_great_circle_closes() {
        // from the equator heading due east: the equator itself
        let s = unit_sphere();
        let m = MetricData::new(&s);
        let step = 1e-3f64;
        let two_pi = std::f64::consts::TAU;
        let path = shoot(&s, &m, 0.0f64, 0.0, 0.0, two_pi, step);
        assert!(path.truncated.is_none());
        let last = path.samples.last().unwrap();
        let start = path.samples[0];
        let err = ((last.xyz[0] - start.xyz[0]).powi(2)
            + (last.xyz[1] - start.xyz[1]).powi(2)
            + (last.xyz[2] - start.xyz[2]).powi(2))
        .sqrt();
        assert!(err < 1e-6, "closure error {err}");
        // and a tilted launch stays on a great circle: |position| = 1
        let tilted = shoot(&s, &m, 0.3f64, 0.2, 0.9, 4.0, 1e-3);
        for sample in tilted.samples.iter().step_by(100) {
            let norm = (sample.xyz[0].powi(2) + sample.xyz[1].powi(2) + sample.xyz[2].powi(2))
                .sqrt();
            assert!((norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn speed_is_conserved() {
        let s = torus();
        let m = MetricData::new(&s);
        let path = shoot(&s, &m, 0.0f64, std::f64::consts::FRAC_PI_2, 0.7, 4.0, 1e-3);
        let initial = m.speed(path.samples[0].u, path.samples[0].v, path.samples[0].p, path.samples[0].q);
        for sample in path.samples.iter().step_by(50) {
            let sp = m.speed(sample.u, sample.v, sample.p, sample.q);
            // < 1e−8 drift per unit parameter at step 1e−3
            assert!((sp - initial).abs() < 1e-8 * (1.0 + sample.s));
        }
    }

    #[test]
    fn rk4_order_via_step_halving() {
        // a tilted launch makes the coordinate ODE genuinely nonlinear;
        // the closed-form great circle through the initial data is the oracle
        let s = unit_sphere();
        let m = MetricData::new(&s);
        let (a, b, theta) = (0.3f64, 0.2, 0.9);
        let target = 1.0f64;
        let exact = {
            let p0 = s.embed(a, b);
            // velocity = p·x_u + q·x_v
            let (p, q) = (theta.cos(), theta.sin());
            let xu = [
                -a.sin() * b.cos(),
                a.cos() * b.cos(),
                0.0,
            ];
            let xv = [
                -a.cos() * b.sin(),
                -a.sin() * b.sin(),
                b.cos(),
            ];
            let w = [
                p * xu[0] + q * xv[0],
                p * xu[1] + q * xv[1],
                p * xu[2] + q * xv[2],
            ];
            let speed = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            let (c, sn) = ((speed * target).cos(), (speed * target).sin());
            [
                c * p0[0] + sn * w[0] / speed,
                c * p0[1] + sn * w[1] / speed,
                c * p0[2] + sn * w[2] / speed,
            ]
        };
        let err_at = |h: f64| {
            let path = shoot(&s, &m, a, b, theta, target, h);
            let last = path.samples.last().unwrap().xyz;
            ((last[0] - exact[0]).powi(2)
                + (last[1] - exact[1]).powi(2)
                + (last[2] - exact[2]).powi(2))
            .sqrt()
        };
        let e1 = err_at(0.02);
        let e2 = err_at(0.01);
        assert!(e1 / e2 >= 12.0, "order ratio {} ({e1} / {e2})", e1 / e2);
    }

    #[test]
    fn torus_clairaut_invariant() {
        // (2+cos v)²·u' is a first integral on the surface of revolution
        let s = torus();
        let m = MetricData::new(&s);
        let path = shoot(&s, &m, 0.0f64, std::f64::consts::FRAC_PI_2, 0.4, 4.0, 1e-3);
        let clairaut =
            |sample: &GeodesicSample<f64>| (2.0 + sample.v.cos()).powi(2) * sample.p;
        let c0 = clairaut(&path.samples[0]);
        for sample in &path.samples {
            assert!((clairaut(sample) - c0).abs() < 1e-6, "at s = {}", sample.s);
        }
    }

    #[test]
    fn spray_shapes() {
        let s = plane();
        let m = MetricData::new(&s);
        let rays = spray(&s, &m, 0.0f64, 0.0, 4, 1.0, 0.05);
        assert_eq!(rays.len(), 5);
        // all rays have the same sample count; first and last coincide
        let len = rays[0].samples.len();
        assert!(rays.iter().all(|r| r.samples.len() == len));
        for (a, b) in rays[0].samples.iter().zip(&rays[4].samples) {
            assert!((a.u - b.u).abs() < 1e-12 && (a.v - b.v).abs() < 1e-12);
        }
        // 90° spacing: ray 1 points along +v
        let r1 = rays[1].samples.last().unwrap();
        assert!(r1.u.abs() < 1e-9 && (r1.v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn plane_circles_are_round() {
        let s = plane();
        let m = MetricData::new(&s);
        let rays = spray(&s, &m, 0.0f64, 0.0, 64, 1.0, 0.005);
        let cs = circles(&rays, 1.0, 0.5, 0.005);
        assert_eq!(cs.len(), 2);
        for (circle, radius) in cs.iter().zip([0.5, 1.0]) {
            assert!(circle.complete);
            assert!(!circle.self_intersection_hint);
            for p in &circle.points {
                let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                assert!((r - radius).abs() < 1e-6, "radius {r} vs {radius}");
            }
        }
    }

    #[test]
    fn polar_circle_is_the_equator() {
        // stereographic chart of the unit sphere centred on the south pole;
        // the conformal factor is 1 at the origin, so the ODE parameter is
        // arclength and the circle at π/2 is the equator z = 0
        let s = SurfacePatch::parse(
            "(u/(1+(u^2+v^2)/4), v/(1+(u^2+v^2)/4), ((u^2+v^2)/4-1)/(1+(u^2+v^2)/4))",
        )
        .unwrap();
        // sanity: the image really lies on the unit sphere
        let p = s.embed(0.7f64, -0.3);
        assert!((p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0).abs() < 1e-12);
        let m = MetricData::new(&s);
        let quarter = std::f64::consts::FRAC_PI_2;
        let rays = spray(&s, &m, 0.0f64, 0.0, 80, quarter, 1e-3);
        let cs = circles(&rays, quarter, quarter, 1e-3);
        assert_eq!(cs.len(), 1);
        let equator = &cs[0];
        assert!(equator.complete);
        assert!(!equator.self_intersection_hint);
        for p in &equator.points {
            assert!(p[2].abs() < 1e-6, "off the equator: z = {}", p[2]);
        }
    }

    #[test]
    fn degeneracy_truncates_mid_flight() {
        // cone apex hit exactly on a dyadic step grid: the path truncates
        // with the failing point recorded
        let s = SurfacePatch::parse("(u*cos(v), u*sin(v), u)").unwrap();
        let m = MetricData::new(&s);
        let path = shoot(&s, &m, 1.0f64, 0.0, std::f64::consts::PI, 2.0, 0.25);
        let d = path.truncated.expect("must truncate at the apex");
        assert!(d.u.abs() < 1e-12);
        assert!(path.samples.len() < 9);
    }
}
