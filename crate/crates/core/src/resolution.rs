//! Free resolutions and the derived functors `Tor_i(κ(q), M)`,
//! `Ext^i(M, κ(q))`.

use crate::complex::BoundedComplex;
use crate::error::{Error, Result};
use crate::linalg::{image_generators, kernel_generators};
use crate::matrix::ExactMatrix;
use crate::module::FpModule;
use crate::ring::Prime;

/// `⋯ -> F_1 -> F_0 -> M -> 0` with terms in degrees `0..=depth` at most.
/// Over domains the first syzygy is already free, so the length is at most
/// one. Otherwise syzygies are iterated until they vanish or `depth` is hit.
pub fn free_resolution(m: &FpModule, depth: usize) -> Result<BoundedComplex> {
    if depth == 0 {
        return Err(Error::Precondition("resolution depth must be at least 1".into()));
    }
    let ring = m.ring();
    let mut mats: Vec<ExactMatrix> = Vec::new();
    let d1 = image_generators(m.relations());
    let mut ranks = vec![m.generators()];
    if d1.cols() > 0 {
        ranks.push(d1.cols());
        mats.push(d1);
    }
    if !ring.is_domain() {
        while mats.len() < depth {
            // No relations: the module is free.
            let Some(last) = mats.last() else { break };
            let next = image_generators(&kernel_generators(last));
            if next.cols() == 0 {
                break;
            }
            ranks.push(next.cols());
            mats.push(next);
        }
    }
    BoundedComplex::from_free(ring, 0, &ranks, mats)
}

/// First `(degree, period)` with `d_{degree+period} = d_degree`, if the
/// resolution repeats within its computed range.
pub fn repeated_syzygy(res: &BoundedComplex) -> Option<(i64, i64)> {
    for start in 1..=res.hi() {
        for period in 1..=2 {
            if start + period <= res.hi() && res.boundary_matrix(start) == res.boundary_matrix(start + period) {
                return Some((start, period));
            }
        }
    }
    None
}

fn check_depth(i: usize, depth: usize) -> Result<()> {
    if i >= depth {
        return Err(Error::DepthInsufficient { degree: i, depth });
    }
    Ok(())
}

/// `dim Tor_i(κ(q), M) = dim H_i(κ(q) ⊗ F)`, from fiber ranks.
pub fn tor_fiber(m: &FpModule, q: Prime, i: usize, depth: usize) -> Result<usize> {
    check_depth(i, depth)?;
    let res = free_resolution(m, depth)?;
    Ok(res.fiber_profile(q)?.dim(i as i64))
}

/// `dim Ext^i(M, κ(q))`: cohomology of `Hom(F, κ(q))`, computed through the
/// module machinery on the dual of the fiber complex.
pub fn ext_fiber(m: &FpModule, q: Prime, i: usize, depth: usize) -> Result<usize> {
    check_depth(i, depth)?;
    let res = free_resolution(m, depth)?;
    let cochains = res.fiber_complex(q)?.dual()?;
    Ok(cochains.homology(-(i as i64))?.invariant_factors().free_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseRing;

    #[test]
    fn free_module_over_non_domain() {
        let r = BaseRing::integers_mod(12).unwrap();
        let m = FpModule::free(r, 2);
        assert_eq!(free_resolution(&m, 3).unwrap().ranks(), vec![2]);
        assert_eq!(tor_fiber(&m, Prime::At(2), 0, 3).unwrap(), 2);
        let zero_rel = FpModule::new(r, 1, ExactMatrix::zero(r, 1, 2)).unwrap();
        assert_eq!(tor_fiber(&zero_rel, Prime::At(3), 1, 3).unwrap(), 0);
    }

    const Z: BaseRing = BaseRing::INTEGERS;

    #[test]
    fn resolutions() {
        let r = free_resolution(&FpModule::cyclic_int(Z, 2), 3).unwrap();
        assert_eq!(r.ranks(), vec![1, 1]);
        assert_eq!(r.boundary_matrix(1).get(0, 0).to_string(), "2");
        assert_eq!(free_resolution(&FpModule::free(Z, 2), 2).unwrap().ranks(), vec![2]);
        let z4 = BaseRing::integers_mod(4).unwrap();
        let r = free_resolution(&FpModule::cyclic_int(z4, 2), 4).unwrap();
        assert_eq!(r.ranks(), vec![1; 5]);
        for i in 1..=4 {
            assert_eq!(r.boundary_matrix(i).get(0, 0).to_string(), "2");
        }
        assert_eq!(repeated_syzygy(&r), Some((1, 1)));
        assert!(free_resolution(&FpModule::free(Z, 1), 0).is_err());
    }

    #[test]
    fn tor_and_ext_examples() {
        let z2 = FpModule::cyclic_int(Z, 2);
        assert_eq!(tor_fiber(&z2, Prime::At(2), 1, 2).unwrap(), 1);
        assert_eq!(tor_fiber(&z2, Prime::At(3), 1, 2).unwrap(), 0);
        assert_eq!(tor_fiber(&FpModule::free(Z, 1), Prime::At(5), 1, 2).unwrap(), 0);
        assert_eq!(ext_fiber(&z2, Prime::At(2), 1, 2).unwrap(), 1);
        assert_eq!(ext_fiber(&FpModule::free(Z, 1), Prime::At(7), 1, 2).unwrap(), 0);
        assert_eq!(ext_fiber(&z2, Prime::At(3), 0, 2).unwrap(), 0);
        assert!(matches!(tor_fiber(&z2, Prime::At(2), 2, 2), Err(Error::DepthInsufficient { .. })));
    }

    #[test]
    fn periodic_tor_over_z4() {
        let z4 = BaseRing::integers_mod(4).unwrap();
        let m = FpModule::cyclic_int(z4, 2);
        for i in 0..=6 {
            assert_eq!(tor_fiber(&m, Prime::At(2), i, 7).unwrap(), 1);
            assert_eq!(ext_fiber(&m, Prime::At(2), i, 7).unwrap(), 1);
        }
    }
}
