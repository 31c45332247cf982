//! Conjugacy classes of elements.

use crate::group::Group;

/// Partition of a group into conjugacy classes. Classes are ordered by their
/// representative, which is the least element index in the class; class 0 is
/// always `{identity}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyPartition {
    pub(crate) fn compute(g: &Group) -> Self {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut members = Vec::new();
            for h in 0..n {
                let y = g.conj(h, x);
                if class_of[y] == usize::MAX {
                    class_of[y] = idx;
                    members.push(y);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        ConjugacyPartition { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &[usize] {
        &self.classes[k]
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn representative(&self, k: usize) -> usize {
        self.classes[k][0]
    }

    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c[0])
    }

    pub fn size(&self, k: usize) -> usize {
        self.classes[k].len()
    }

    /// Class index of the inverse class.
    pub fn inverse_class(&self, g: &Group, k: usize) -> usize {
        self.class_of(g.inv(self.representative(k)))
    }

    /// Class index of `x^e` for any `x` in class `k`.
    pub fn power_class(&self, g: &Group, k: usize, e: u64) -> usize {
        self.class_of(g.pow(self.representative(k), e))
    }
}
