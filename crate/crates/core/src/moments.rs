//! Volume, centroid, second-moment matrix and directional moments (orders
//! 0-3) of polytopes, summed exactly over a triangulation.
//!
//! Per simplex `S = conv{v_0..v_n}` and `t_i = v_i·h`,
//! `∫_S (y·h)^j dy = Vol(S) · n! j! / (n+j)! · H_j(t_0, ..., t_n)` with `H_j`
//! the complete homogeneous symmetric polynomial. All sums are taken about
//! the triangulation apex and shifted back, which keeps float cancellation
//! small for bodies far from the origin.

use crate::error::{Error, Result};
use crate::geometry::{triangulate, Polytope, Simplex, Tolerances};
use crate::scalar::{dot, factorial, Scalar};

/// Moments of the marginal `y·h` for `y` uniform on a body.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalMoments<S = f64> {
    pub mu1: S,
    pub mu2sq: S,
    pub mu3cu: S,
    pub raw1: S,
    pub raw2: S,
    pub raw3: S,
    pub vol: S,
}

impl<S: Scalar> MarginalMoments<S> {
    /// Builds every field from raw moments about `shift` (i.e. of `t - shift`).
    pub fn from_shifted_raw(vol: S, shift: S, r1: S, r2: S, r3: S) -> Self {
        let two = S::from_i64(2);
        let three = S::from_i64(3);
        let mu2sq = r2.clone() - r1.clone() * r1.clone();
        let mu3cu = r3.clone() - three.clone() * r1.clone() * r2.clone() + two.clone() * r1.clone() * r1.clone() * r1.clone();
        let raw1 = shift.clone() + r1.clone();
        let raw2 = r2.clone() + two * shift.clone() * r1.clone() + shift.clone() * shift.clone();
        let raw3 = r3
            + three.clone() * shift.clone() * r2
            + three * shift.clone() * shift.clone() * r1
            + shift.clone() * shift.clone() * shift;
        Self { mu1: raw1.clone(), mu2sq, mu3cu, raw1, raw2, raw3, vol }
    }

    /// Central third moment from the raw moments; compare with `mu3cu`.
    pub fn mu3cu_from_raw(&self) -> S {
        let (r1, r2, r3) = (self.raw1.clone(), self.raw2.clone(), self.raw3.clone());
        r3 - S::from_i64(3) * r1.clone() * r2 + S::from_i64(2) * r1.clone() * r1.clone() * r1
    }

    pub fn to_f64(&self) -> MarginalMoments<f64> {
        MarginalMoments {
            mu1: self.mu1.to_f64(),
            mu2sq: self.mu2sq.to_f64(),
            mu3cu: self.mu3cu.to_f64(),
            raw1: self.raw1.to_f64(),
            raw2: self.raw2.to_f64(),
            raw3: self.raw3.to_f64(),
            vol: self.vol.to_f64(),
        }
    }
}

/// `vol = ∫ dy`, `m1 = ∫ y dy`, `m2 = ∫ y yᵀ dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct BodyMoments<S = f64> {
    pub vol: S,
    pub m1: Vec<S>,
    pub m2: Vec<Vec<S>>,
}

/// Volume, centroid and covariance, computed about the triangulation apex.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralBodyMoments<S = f64> {
    pub vol: S,
    pub centroid: Vec<S>,
    pub cov: Vec<Vec<S>>,
}

/// `H_j(t_0, ..., t_n)` for `j <= 3`.
fn complete_homogeneous<S: Scalar>(t: &[S], j: usize) -> S {
    // h[d] holds H_d over the prefix of variables processed so far
    let mut h = vec![S::zero(); j + 1];
    h[0] = S::one();
    for ti in t {
        for d in 1..=j {
            h[d] = h[d].clone() + ti.clone() * h[d - 1].clone();
        }
    }
    h[j].clone()
}

/// `∫_S (y·h)^j dy` in closed form.
pub fn simplex_directional_moment<S: Scalar>(s: &Simplex<S>, h: &[S], j: usize) -> Result<S> {
    if j > 3 {
        return Err(Error::OrderUnsupported(j));
    }
    let vol = s.volume();
    if j == 0 {
        return Ok(vol);
    }
    let n = s.dim();
    let t: Vec<S> = s.verts.iter().map(|v| dot(v, h)).collect();
    let weight = S::from_i64(factorial(n) * factorial(j)) / S::from_i64(factorial(n + j));
    Ok(vol * weight * complete_homogeneous(&t, j))
}

fn translate<S: Scalar>(s: &Simplex<S>, origin: &[S]) -> Simplex<S> {
    Simplex::new(
        s.verts
            .iter()
            .map(|v| v.iter().zip(origin).map(|(a, b)| a.clone() - b.clone()).collect())
            .collect(),
    )
}

/// Marginal moments over an explicit list of simplices, taken about `origin`.
pub fn marginal_moments_of<S: Scalar>(simplices: &[Simplex<S>], h: &[S], origin: &[S]) -> Result<MarginalMoments<S>> {
    if h.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroDirection);
    }
    let mut sums = [S::zero(), S::zero(), S::zero(), S::zero()];
    for s in simplices {
        let local = translate(s, origin);
        for (j, acc) in sums.iter_mut().enumerate() {
            *acc = acc.clone() + simplex_directional_moment(&local, h, j)?;
        }
    }
    let [vol, a1, a2, a3] = sums;
    if !vol.is_positive() {
        return Err(Error::DimensionDeficient { rank: 0, dim: h.len() });
    }
    Ok(MarginalMoments::from_shifted_raw(
        vol.clone(),
        dot(origin, h),
        a1 / vol.clone(),
        a2 / vol.clone(),
        a3 / vol,
    ))
}

/// Moments of `y·h` for `y` uniform on `p`.
pub fn marginal_moments<S: Scalar>(p: &Polytope<S>, h: &[S], tol: &Tolerances) -> Result<MarginalMoments<S>> {
    let simplices = triangulate(p, tol)?;
    marginal_moments_of(&simplices, h, &p.vertex_centroid())
}

/// Centroid and covariance of the uniform distribution on the simplices.
pub fn central_moments_of<S: Scalar>(simplices: &[Simplex<S>], origin: &[S]) -> Result<CentralBodyMoments<S>> {
    let n = origin.len();
    let mut vol = S::zero();
    let mut m1 = vec![S::zero(); n];
    let mut m2 = vec![vec![S::zero(); n]; n];
    let denom = S::from_i64(((n + 1) * (n + 2)) as i64);
    let np1 = S::from_i64((n + 1) as i64);
    for s in simplices {
        let local = translate(s, origin);
        let v = local.volume();
        if v.is_zero() {
            continue;
        }
        let mut sum = vec![S::zero(); n];
        let mut outer = vec![vec![S::zero(); n]; n];
        for p in &local.verts {
            for a in 0..n {
                sum[a] = sum[a].clone() + p[a].clone();
                for b in 0..n {
                    outer[a][b] = outer[a][b].clone() + p[a].clone() * p[b].clone();
                }
            }
        }
        for a in 0..n {
            m1[a] = m1[a].clone() + v.clone() * sum[a].clone() / np1.clone();
            for b in 0..n {
                let term = outer[a][b].clone() + sum[a].clone() * sum[b].clone();
                m2[a][b] = m2[a][b].clone() + v.clone() * term / denom.clone();
            }
        }
        vol = vol + v;
    }
    if !vol.is_positive() {
        return Err(Error::DimensionDeficient { rank: 0, dim: n });
    }
    let mean: Vec<S> = m1.iter().map(|x| x.clone() / vol.clone()).collect();
    let cov = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| m2[a][b].clone() / vol.clone() - mean[a].clone() * mean[b].clone())
                .collect()
        })
        .collect();
    let centroid = mean.iter().zip(origin).map(|(m, o)| m.clone() + o.clone()).collect();
    Ok(CentralBodyMoments { vol, centroid, cov })
}

pub fn central_body_moments<S: Scalar>(p: &Polytope<S>, tol: &Tolerances) -> Result<CentralBodyMoments<S>> {
    let simplices = triangulate(p, tol)?;
    central_moments_of(&simplices, &p.vertex_centroid())
}

/// Raw moments about the origin, summed from per-simplex closed forms.
pub fn body_moments<S: Scalar>(p: &Polytope<S>, tol: &Tolerances) -> Result<BodyMoments<S>> {
    let c = central_body_moments(p, tol)?;
    let n = p.dim();
    let m1: Vec<S> = c.centroid.iter().map(|x| x.clone() * c.vol.clone()).collect();
    let m2 = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (c.cov[a][b].clone() + c.centroid[a].clone() * c.centroid[b].clone()) * c.vol.clone())
                .collect()
        })
        .collect();
    Ok(BodyMoments { vol: c.vol, m1, m2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cross_polytope, hypercube, standard_simplex};
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unit_interval_second_moment() {
        let s = Simplex::new(vec![vec![0.0], vec![1.0]]);
        assert!((simplex_directional_moment(&s, &[1.0], 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(simplex_directional_moment(&s, &[1.0], 4), Err(Error::OrderUnsupported(4))));
    }

    #[test]
    fn unit_triangle_first_moment() {
        let s = Simplex::new(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
        let m = simplex_directional_moment(&s, &[q(1, 1), q(0, 1)], 1).unwrap();
        assert_eq!(m, q(1, 6));
    }

    #[test]
    fn square_body_moments() {
        let tol = Tolerances::default();
        let bm = body_moments(&hypercube::<BigRational>(2, -1.0, 1.0), &tol).unwrap();
        assert_eq!(bm.vol, q(4, 1));
        assert_eq!(bm.m1, vec![q(0, 1), q(0, 1)]);
        assert_eq!(bm.m2, vec![vec![q(4, 3), q(0, 1)], vec![q(0, 1), q(4, 3)]]);
    }

    #[test]
    fn cross_polytope_moments() {
        let tol = Tolerances::default();
        let cp = cross_polytope::<BigRational>(2);
        let bm = body_moments(&cp, &tol).unwrap();
        assert_eq!(bm.vol, q(2, 1));
        assert_eq!(bm.m2, vec![vec![q(1, 3), q(0, 1)], vec![q(0, 1), q(1, 3)]]);
        let mm = marginal_moments(&cp, &[q(1, 1), q(0, 1)], &tol).unwrap();
        assert_eq!((mm.mu1, mm.mu2sq, mm.mu3cu), (q(0, 1), q(1, 6), q(0, 1)));
    }

    #[test]
    fn unit_triangle_marginal() {
        let tol = Tolerances::default();
        let tri = standard_simplex::<BigRational>(2, 1.0);
        let bm = body_moments(&tri, &tol).unwrap();
        assert_eq!(bm.vol, q(1, 2));
        assert_eq!(bm.m1, vec![q(1, 6), q(1, 6)]);
        let mm = marginal_moments(&tri, &[q(1, 1), q(0, 1)], &tol).unwrap();
        assert_eq!(mm.mu1, q(1, 3));
        assert_eq!(mm.mu2sq, q(1, 18));
        // density 2(1-t): third central moment of Beta(1,2) is 1/135
        assert_eq!(mm.mu3cu, q(1, 135));
        assert_eq!(mm.mu3cu_from_raw(), mm.mu3cu);
    }

    #[test]
    fn unit_interval_marginal() {
        let tol = Tolerances::default();
        let mm = marginal_moments(&hypercube::<BigRational>(1, 0.0, 1.0), &[q(1, 1)], &tol).unwrap();
        assert_eq!((mm.mu1, mm.mu2sq, mm.mu3cu), (q(1, 2), q(1, 12), q(0, 1)));
    }

    #[test]
    fn zero_direction_rejected() {
        let tol = Tolerances::default();
        let sq = hypercube::<f64>(2, -1.0, 1.0);
        assert!(matches!(marginal_moments(&sq, &[0.0, 0.0], &tol), Err(Error::ZeroDirection)));
    }
}
