//! Group automorphisms and orbit partitions.

use std::collections::HashSet;

use super::{FiniteGroup, Partition};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAutomorphism {
    map: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn identity(g: &FiniteGroup) -> Self {
        GroupAutomorphism { map: (0..g.order()).collect() }
    }

    /// Validates bijectivity and `map(gh) = map(g)map(h)` over the whole table.
    pub fn from_map(g: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let n = g.order();
        if map.len() != n {
            return Err(Error::NotAutomorphism(format!("{} images for {n} elements", map.len())));
        }
        let mut hit = vec![false; n];
        for &x in &map {
            if x >= n || hit[x] {
                return Err(Error::NotAutomorphism("map is not a bijection".into()));
            }
            hit[x] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if map[g.mul(a, b)] != g.mul(map[a], map[b]) {
                    return Err(Error::NotAutomorphism(format!(
                        "fails to be multiplicative on ({}, {})",
                        g.label(a),
                        g.label(b)
                    )));
                }
            }
        }
        Ok(GroupAutomorphism { map })
    }

    /// Extends images of `g.generators()` (same order) along the Cayley graph,
    /// then validates exhaustively.
    pub fn from_generator_images(g: &FiniteGroup, images: &[usize]) -> Result<Self> {
        let gens = g.generators();
        if images.len() != gens.len() {
            return Err(Error::NotAutomorphism(format!(
                "{} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        Self::from_images(g, gens, images)
    }

    /// Like [`from_generator_images`](Self::from_generator_images) for an
    /// arbitrary generating set.
    pub fn from_images(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Result<Self> {
        let n = g.order();
        if images.iter().any(|&x| x >= n) || gens.len() != images.len() {
            return Err(Error::NotAutomorphism("image out of range".into()));
        }
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for (&s, &t) in gens.iter().zip(images) {
                let y = g.mul(x, s);
                let v = g.mul(map[x], t);
                if map[y] == usize::MAX {
                    map[y] = v;
                    queue.push(y);
                } else if map[y] != v {
                    return Err(Error::NotAutomorphism(format!(
                        "images do not extend to a homomorphism at {}",
                        g.label(y)
                    )));
                }
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::NotAutomorphism("elements do not generate the group".into()));
        }
        Self::from_map(g, map)
    }

    /// Conjugation `h ↦ x h x⁻¹`.
    pub fn inner(g: &FiniteGroup, x: usize) -> Self {
        let xi = g.inv(x);
        GroupAutomorphism { map: (0..g.order()).map(|h| g.mul(g.mul(x, h), xi)).collect() }
    }

    /// Conjugation by a permutation of the underlying points, for permutation
    /// groups that are normalized by it (e.g. `A_n` under a transposition).
    pub fn permutation_conjugation(g: &FiniteGroup, sigma: &[usize]) -> Result<Self> {
        let k = sigma.len();
        let mut sigma_inv = vec![0; k];
        for (i, &s) in sigma.iter().enumerate() {
            sigma_inv[s] = i;
        }
        let mut map = Vec::with_capacity(g.order());
        for h in 0..g.order() {
            let p = g
                .permutation(h)
                .ok_or_else(|| Error::NotAutomorphism("not a permutation group".into()))?;
            if p.len() != k {
                return Err(Error::NotAutomorphism("degree mismatch".into()));
            }
            let conj: Vec<usize> = (0..k).map(|x| sigma[p[sigma_inv[x]]]).collect();
            map.push(g.find_permutation(&conj).ok_or_else(|| {
                Error::NotAutomorphism("conjugate leaves the group".into())
            })?);
        }
        Self::from_map(g, map)
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        GroupAutomorphism { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        GroupAutomorphism { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

/// All elements of the group generated by `gens`, identity first.
pub fn closure(g: &FiniteGroup, gens: &[GroupAutomorphism]) -> Vec<GroupAutomorphism> {
    let id = GroupAutomorphism::identity(g);
    let mut seen: HashSet<GroupAutomorphism> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for s in gens {
            let next = out[i].compose(s);
            if seen.insert(next.clone()) {
                out.push(next);
            }
        }
        i += 1;
    }
    out
}

/// Orbits of the group generated by `gens` acting on `G`.
pub fn orbit_partition(g: &FiniteGroup, gens: &[GroupAutomorphism]) -> Partition {
    let n = g.order();
    let mut block = vec![usize::MAX; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if block[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        block[start] = id;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            for s in gens {
                let y = s.apply(orbit[i]);
                if block[y] == usize::MAX {
                    block[y] = id;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        blocks.push(orbit);
    }
    Partition::new(blocks, n).expect("orbits form a partition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_family, Family};

    #[test]
    fn quasiquaternion_automorphism_has_order_two() {
        let g = build_family(Family::Quasiquaternion(3)).unwrap();
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let alpha = GroupAutomorphism::from_generator_images(&g, &[a, g.pow(b, 3)]).unwrap();
        assert_eq!(alpha.order(), 2);
        assert_eq!(orbit_partition(&g, &[alpha]).len(), 9);
    }

    #[test]
    fn identity_images() {
        let g = build_family(Family::Dihedral(3)).unwrap();
        let alpha = GroupAutomorphism::from_generator_images(&g, g.generators()).unwrap();
        assert!(alpha.is_identity());
        assert_eq!(alpha.order(), 1);
        assert_eq!(orbit_partition(&g, &[alpha]).len(), g.order());
    }

    #[test]
    fn dihedral_power_map() {
        let g = build_family(Family::Dihedral(4)).unwrap();
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let gamma = GroupAutomorphism::from_generator_images(&g, &[g.pow(a, 3), b]).unwrap();
        assert_eq!(gamma.order(), 2);
        assert_eq!(orbit_partition(&g, &[gamma]).len(), 10);
        // a ↦ a² is not injective.
        assert!(GroupAutomorphism::from_generator_images(&g, &[g.pow(a, 2), b]).is_err());
        // a ↦ b does not extend.
        assert!(GroupAutomorphism::from_generator_images(&g, &[b, a]).is_err());
    }

    #[test]
    fn symmetric_inner_orbits() {
        let g = build_family(Family::Symmetric(4)).unwrap();
        let t = g.find("2134").unwrap();
        assert_eq!(orbit_partition(&g, &[GroupAutomorphism::inner(&g, t)]).len(), 14);
    }

    #[test]
    fn alternating_outer_orbits() {
        for (n, want) in [(4, 7), (5, 33)] {
            let g = build_family(Family::Alternating(n)).unwrap();
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(0, 1);
            let alpha = GroupAutomorphism::permutation_conjugation(&g, &sigma).unwrap();
            assert_eq!(alpha.order(), 2);
            assert_eq!(orbit_partition(&g, &[alpha]).len(), want);
        }
    }

    #[test]
    fn closure_and_generating_set_invariance() {
        let g = build_family(Family::Dihedral(6)).unwrap();
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        let g5 = GroupAutomorphism::from_generator_images(&g, &[g.pow(a, 5), b]).unwrap();
        let g7 = GroupAutomorphism::from_generator_images(&g, &[g.pow(a, 7), b]).unwrap();
        let all = closure(&g, &[g5.clone(), g7.clone()]);
        assert_eq!(all.len(), 4);
        let p1 = orbit_partition(&g, &[g5.clone(), g7.clone()]);
        let p2 = orbit_partition(&g, &[g5.compose(&g7), g5]);
        assert_eq!(p1.len(), p2.len());
    }
}
