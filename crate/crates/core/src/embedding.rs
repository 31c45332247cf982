use std::sync::Arc;

use serde::Serialize;

use crate::bits::Bitset;
use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Inclusion,
    /// `h -> g h g^-1` followed by inclusion; `witness` is `g` as an element
    /// of the common ambient group.
    ConjugationThenInclusion { witness: usize },
    Relabeling,
}

/// An injective homomorphism between two table groups, checked exhaustively
/// at construction.
#[derive(Debug, Clone)]
pub struct GroupEmbedding {
    source: Arc<Group>,
    target: Arc<Group>,
    map: Vec<usize>,
    image: Bitset,
    kind: EmbeddingKind,
}

impl GroupEmbedding {
    pub fn new(source: Arc<Group>, target: Arc<Group>, map: Vec<usize>, kind: EmbeddingKind) -> Result<Self> {
        let n = source.order();
        if map.len() != n {
            return Err(Error::NotHomomorphism(format!("map has {} entries for a group of order {n}", map.len())));
        }
        let mut image = Bitset::new(target.order());
        for (x, &y) in map.iter().enumerate() {
            if y >= target.order() {
                return Err(Error::NotHomomorphism(format!("{x} maps outside the target")));
            }
            if !image.insert(y) {
                return Err(Error::NotHomomorphism(format!("not injective at {x}")));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(Error::NotHomomorphism(format!("product of {x} and {y} not preserved")));
                }
            }
        }
        Ok(GroupEmbedding { source, target, map, image, kind })
    }

    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self) -> &Bitset {
        &self.image
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupEmbedding, kind: EmbeddingKind) -> Result<GroupEmbedding> {
        if !self.target.same_as(&next.source) {
            return Err(Error::GroupMismatch);
        }
        let map = self.map.iter().map(|&x| next.apply(x)).collect();
        GroupEmbedding::new(self.source.clone(), next.target.clone(), map, kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::cyclic;

    #[test]
    fn rejects_non_homomorphism() {
        let c3 = cyclic(3).unwrap();
        let c9 = cyclic(9).unwrap();
        assert!(GroupEmbedding::new(c3.clone(), c9.clone(), vec![0, 3, 6], EmbeddingKind::Inclusion).is_ok());
        assert!(matches!(
            GroupEmbedding::new(c3.clone(), c9.clone(), vec![0, 1, 2], EmbeddingKind::Inclusion),
            Err(Error::NotHomomorphism(_))
        ));
        assert!(matches!(
            GroupEmbedding::new(c3, c9, vec![0, 0, 0], EmbeddingKind::Inclusion),
            Err(Error::NotHomomorphism(_))
        ));
    }
}
