use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{HilbertError, LinkSpace, LinkState};
use crate::lattice::{LinkId, TorusLattice};
use crate::repkernel::HalfInt;

/// Tensor-product basis over an ordered set of links. The first link is the
/// most significant mixed-radix digit.
#[derive(Debug, PartialEq)]
pub struct ProductBasis {
    links: Vec<LinkId>,
    space: LinkSpace,
    strides: Vec<u64>,
    position: FxHashMap<LinkId, usize>,
    dim: u64,
}

impl ProductBasis {
    pub fn new(links: Vec<LinkId>, jmax: HalfInt) -> Result<Arc<Self>, HilbertError> {
        let space = LinkSpace::new(jmax);
        let d = space.dim() as u128;
        let n = links.len() as u32;
        let dim = d.checked_pow(n).filter(|&v| v <= u128::from(u64::MAX)).ok_or(HilbertError::TooLarge(u128::MAX))?;
        let mut strides = vec![1u64; links.len()];
        for k in (0..links.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * d as u64;
        }
        let position: FxHashMap<LinkId, usize> = links.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        if position.len() != links.len() {
            return Err(HilbertError::Invalid("duplicate link in basis".into()));
        }
        Ok(Arc::new(Self { links, space, strides, position, dim: dim as u64 }))
    }

    /// Every link of the lattice, in lattice order.
    pub fn full(lat: &TorusLattice, jmax: HalfInt) -> Result<Arc<Self>, HilbertError> {
        Self::new(lat.links().collect(), jmax)
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn space(&self) -> &LinkSpace {
        &self.space
    }

    pub fn jmax(&self) -> HalfInt {
        self.space.jmax()
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn link_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn position(&self, link: LinkId) -> Result<usize, HilbertError> {
        self.position.get(&link).copied().ok_or(HilbertError::LinkNotInBasis(link))
    }

    pub fn stride(&self, pos: usize) -> u64 {
        self.strides[pos]
    }

    /// Single-link digit at position `pos`.
    pub fn digit(&self, index: u64, pos: usize) -> usize {
        ((index / self.strides[pos]) % self.space.dim() as u64) as usize
    }

    pub fn digits(&self, index: u64) -> Vec<usize> {
        (0..self.links.len()).map(|p| self.digit(index, p)).collect()
    }

    pub fn index_of(&self, digits: &[usize]) -> u64 {
        digits.iter().zip(&self.strides).map(|(&d, &s)| d as u64 * s).sum()
    }

    pub fn link_state(&self, index: u64, link: LinkId) -> Result<LinkState, HilbertError> {
        Ok(self.space.state(self.digit(index, self.position(link)?)))
    }

    /// All links strictly below the cutoff.
    pub fn is_interior(&self, index: u64) -> bool {
        (0..self.links.len()).all(|p| self.space.is_interior(self.digit(index, p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorusLattice;

    #[test]
    fn index_roundtrip() {
        let lat = TorusLattice::new(2).unwrap();
        let b = ProductBasis::full(&lat, HalfInt::HALF).unwrap();
        assert_eq!(b.dim(), 390_625);
        for idx in [0u64, 1, 4, 5, 12345, 390_624] {
            assert_eq!(b.index_of(&b.digits(idx)), idx);
        }
        let l = lat.link(1, 1, crate::lattice::Dir::Y);
        assert_eq!(b.position(l).unwrap(), 7);
        assert_eq!(b.digit(1, 7), 1);
        assert!(b.is_interior(0));
        assert!(!b.is_interior(1));
    }
}
