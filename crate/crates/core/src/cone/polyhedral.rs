use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::ConeError;
use crate::exact::{dot, linalg, primitive_direction};
use crate::report::ser_rat_vecs;

/// A salient, full-dimensional polyhedral cone, kept in both descriptions.
///
/// `rays` are the extreme rays and `facets` the inward facet normals, each
/// scaled to a primitive integer vector and sorted, so equal cones compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyhedralCone {
    pub dim: usize,
    #[serde(serialize_with = "ser_rat_vecs")]
    pub rays: Vec<Vec<BigRational>>,
    #[serde(serialize_with = "ser_rat_vecs")]
    pub facets: Vec<Vec<BigRational>>,
    /// Indices of input rays that were redundant or repeated.
    pub redundant: Vec<usize>,
}

/// Extreme rays of the pointed cone `{y : a · y ≥ 0 for every row a}` by
/// double description. `rows` must have rank `dim`.
fn extreme_rays_of_h_cone(rows: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigRational>> {
    // initial simplicial cone from `dim` independent rows
    let mut basis_rows: Vec<usize> = Vec::new();
    let mut span = linalg::Span::new(dim);
    for (i, r) in rows.iter().enumerate() {
        if span.insert(r) {
            basis_rows.push(i);
        }
        if span.is_full() {
            break;
        }
    }
    let b = crate::exact::RatMatrix::from_fn(dim, |i, j| rows[basis_rows[i]][j].clone());
    let inv = b.inverse().expect("independent rows");
    let mut rays: Vec<Vec<BigRational>> = (0..dim).map(|j| primitive_direction(&inv.column(j))).collect();
    let mut processed: Vec<usize> = basis_rows.clone();

    for (i, a) in rows.iter().enumerate() {
        if basis_rows.contains(&i) {
            continue;
        }
        let values: Vec<BigRational> = rays.iter().map(|r| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        let mut next: Vec<Vec<BigRational>> = (0..rays.len())
            .filter(|&k| !values[k].is_negative())
            .map(|k| rays[k].clone())
            .collect();
        let active = |r: &Vec<BigRational>| -> Vec<usize> {
            processed
                .iter()
                .copied()
                .filter(|&p| dot(&rows[p], r).is_zero())
                .collect()
        };
        let active_sets: Vec<Vec<usize>> = rays.iter().map(active).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<Vec<BigRational>> = active_sets[p]
                    .iter()
                    .filter(|x| active_sets[n].contains(x))
                    .map(|&x| rows[x].clone())
                    .collect();
                if dim < 2 || linalg::rank(&common) != dim - 2 {
                    continue;
                }
                let combo: Vec<BigRational> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(rn, rp)| &values[p] * rn - &values[n] * rp)
                    .collect();
                next.push(primitive_direction(&combo));
            }
        }
        processed.push(i);
        next.sort();
        next.dedup();
        rays = next;
    }
    rays.sort();
    rays
}

impl PolyhedralCone {
    /// Builds the cone spanned by `rays`, computing its facets exactly.
    pub fn from_rays(rays: &[Vec<BigRational>]) -> Result<Self, ConeError> {
        let dim = rays.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(ConeError::Empty);
        }
        if let Some(bad) = rays.iter().position(|r| r.len() != dim) {
            return Err(ConeError::RayLength {
                index: bad,
                expected: dim,
                got: rays[bad].len(),
            });
        }
        let nonzero: Vec<Vec<BigRational>> = rays
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let rank = linalg::rank(&nonzero);
        if rank < dim {
            return Err(ConeError::NotFullDimensional { rank, dim });
        }
        let facets = extreme_rays_of_h_cone(&nonzero, dim);
        let facet_rank = linalg::rank(&facets);
        if facet_rank < dim {
            return Err(ConeError::NotSalient);
        }
        let mut extreme: Vec<Vec<BigRational>> = Vec::new();
        let mut redundant = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            let direction = primitive_direction(r);
            let tight: Vec<Vec<BigRational>> = facets
                .iter()
                .filter(|f| dot(f, r).is_zero())
                .cloned()
                .collect();
            let is_extreme = r.iter().any(|x| !x.is_zero())
                && linalg::rank(&tight) == dim - 1
                && !extreme.contains(&direction);
            if is_extreme {
                extreme.push(direction);
            } else {
                redundant.push(i);
            }
        }
        extreme.sort();
        Ok(Self {
            dim,
            rays: extreme,
            facets,
            redundant,
        })
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    pub fn contains_interior(&self, x: &[BigRational]) -> bool {
        self.facets.iter().all(|f| dot(f, x).is_positive())
    }

    /// `{y : y · x ≥ 0 for all x in the cone}`; its rays are this cone's
    /// facets and vice versa.
    pub fn dual(&self) -> PolyhedralCone {
        PolyhedralCone {
            dim: self.dim,
            rays: self.facets.clone(),
            facets: self.rays.clone(),
            redundant: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_vec;

    fn cone(rays: &[&[i64]]) -> Result<PolyhedralCone, ConeError> {
        PolyhedralCone::from_rays(&rays.iter().map(|r| rat_vec(r)).collect::<Vec<_>>())
    }

    #[test]
    fn orthant_facets_are_coordinates() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(
            c.facets,
            vec![rat_vec(&[0, 0, 1]), rat_vec(&[0, 1, 0]), rat_vec(&[1, 0, 0])]
        );
    }

    #[test]
    fn redundant_ray_detected() {
        let c = cone(&[&[1, 0], &[1, 1], &[1, 2]]).unwrap();
        assert_eq!(c.facets, vec![rat_vec(&[0, 1]), rat_vec(&[2, -1])]);
        assert_eq!(c.redundant, vec![1]);
        assert_eq!(c.rays, vec![rat_vec(&[1, 0]), rat_vec(&[1, 2])]);
    }

    #[test]
    fn degenerate_cones_rejected() {
        assert_eq!(cone(&[&[1, 0], &[-1, 0], &[0, 1]]), Err(ConeError::NotSalient));
        assert!(matches!(
            cone(&[&[1, 0, 0], &[0, 1, 0]]),
            Err(ConeError::NotFullDimensional { rank: 2, dim: 3 })
        ));
    }

    #[test]
    fn square_cone_has_four_facets() {
        let c = cone(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1], &[0, 0, 1]]).unwrap();
        assert_eq!(c.facets.len(), 4);
        assert_eq!(c.rays.len(), 4);
        assert_eq!(c.redundant, vec![4]);
        assert!(c.contains_interior(&rat_vec(&[0, 0, 1])));
        assert!(!c.contains(&rat_vec(&[2, 0, 1])));
    }

    #[test]
    fn dual_of_dual() {
        let c = cone(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1], &[1, 1, 3]]).unwrap();
        let d = PolyhedralCone::from_rays(&c.facets).unwrap();
        assert_eq!(d.facets, c.rays);
        assert_eq!(d, c.dual());
        let dd = PolyhedralCone::from_rays(&d.facets).unwrap();
        assert_eq!(dd.rays, c.rays);
    }
}
