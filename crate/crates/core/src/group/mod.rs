//! Finite groups as dense multiplication tables.
//!
//! Elements are indices `0..order` and index 0 is always the identity. All
//! higher layers address group elements by these indices.

mod abelian;
mod automorphism;
mod families;
mod partition;

pub use abelian::{abelian_dual, abelian_dual_with_basis, root_of_unity, AbelianSubgroup};
pub use automorphism::{closure, orbit_partition, GroupAutomorphism};
pub use families::{build_family, Family};
pub use partition::Partition;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
    generators: Vec<usize>,
    /// One-line images (0-based) for permutation groups, indexed like elements.
    permutations: Option<Vec<Vec<usize>>>,
}

/// On-disk form of a user supplied group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a multiplication table: identity at 0, Latin rows and columns,
    /// exhaustive associativity.
    pub fn from_table(
        name: impl Into<String>,
        table: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {g} has length {} instead of {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range in row {g}")));
                }
            }
            mul.extend_from_slice(row);
        }
        Self::from_flat(name.into(), order, mul, labels, None)
    }

    pub(crate) fn from_flat(
        name: String,
        order: usize,
        mul: Vec<usize>,
        labels: Option<Vec<String>>,
        permutations: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        for g in 0..order {
            if mul[g] != g || mul[g * order] != g {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity at {g}")));
            }
        }
        let mut seen = vec![usize::MAX; order];
        for g in 0..order {
            for h in 0..order {
                let x = mul[g * order + h];
                if seen[x] == g {
                    return Err(Error::InvalidGroup(format!("row {g} repeats element {x}")));
                }
                seen[x] = g;
            }
        }
        seen.fill(usize::MAX);
        for h in 0..order {
            for g in 0..order {
                let x = mul[g * order + h];
                if seen[x] == h {
                    return Err(Error::InvalidGroup(format!("column {h} repeats element {x}")));
                }
                seen[x] = h;
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul[a * order + b];
                for c in 0..order {
                    if mul[ab * order + c] != mul[a * order + mul[b * order + c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0; order];
        for g in 0..order {
            inv[g] = (0..order).find(|&h| mul[g * order + h] == 0).expect("Latin row");
        }
        let labels = match labels {
            Some(l) if l.len() != order => {
                return Err(Error::InvalidGroup(format!(
                    "{} labels for {order} elements",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..order).map(|g| g.to_string()).collect(),
        };
        let mut group = FiniteGroup {
            name,
            order,
            mul,
            inv,
            labels,
            generators: Vec::new(),
            permutations,
        };
        group.generators = group.greedy_generators(&(0..order).collect::<Vec<_>>());
        Ok(group)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile = serde_json::from_str(text)?;
        if file.mul.len() != file.order {
            return Err(Error::InvalidGroup(format!(
                "declared order {} but table has {} rows",
                file.order,
                file.mul.len()
            )));
        }
        Self::from_table("user", &file.mul, file.labels)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            order: self.order,
            mul: (0..self.order)
                .map(|g| self.mul[g * self.order..(g + 1) * self.order].to_vec())
                .collect(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// A generating set; for families these are the defining generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub(crate) fn set_generators(&mut self, gens: Vec<usize>) {
        debug_assert_eq!(self.closure_of(&gens).len(), self.order);
        self.generators = gens;
    }

    /// `g^k` for nonnegative `k`.
    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn is_central(&self, g: usize) -> bool {
        (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g))
    }

    pub fn commute(&self, g: usize, h: usize) -> bool {
        self.mul(g, h) == self.mul(h, g)
    }

    /// Sorted subgroup generated by `gens`.
    pub fn closure_of(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    /// Generators picked in index order, each outside the span of the previous.
    pub fn greedy_generators(&self, subset: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &g in subset {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure_of(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        for &h in subset {
            if h >= self.order {
                return false;
            }
            inside[h] = true;
        }
        inside[0]
            && subset.iter().all(|&h| inside[self.inv(h)])
            && subset.iter().all(|&a| subset.iter().all(|&b| inside[self.mul(a, b)]))
    }

    pub fn is_normal_subgroup(&self, subset: &[usize]) -> bool {
        if !self.is_subgroup(subset) {
            return false;
        }
        let mut inside = vec![false; self.order];
        for &h in subset {
            inside[h] = true;
        }
        (0..self.order)
            .all(|g| subset.iter().all(|&n| inside[self.mul(self.mul(g, n), self.inv(g))]))
    }

    /// Quotient by a normal subgroup. Returns the quotient and the projection
    /// `g ↦ gN`; cosets are numbered by their smallest element, so the identity
    /// coset is 0.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal_subgroup(normal) {
            return Err(Error::InvalidGroup("quotient by a non-normal subset".into()));
        }
        let mut coset = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if coset[g] == usize::MAX {
                let k = reps.len();
                reps.push(g);
                for &n in normal {
                    coset[self.mul(g, n)] = k;
                }
            }
        }
        let q = reps.len();
        let mut mul = vec![0; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * q + j] = coset[self.mul(a, b)];
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", self.labels[r])).collect();
        let group = FiniteGroup::from_flat(format!("{}/N", self.name), q, mul, Some(labels), None)?;
        Ok((group, coset))
    }

    /// One-line image of a permutation-group element, 0-based.
    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        self.permutations.as_ref().map(|p| p[g].as_slice())
    }

    pub fn find_permutation(&self, perm: &[usize]) -> Option<usize> {
        self.permutations.as_ref()?.iter().position(|p| p == perm)
    }

    /// Table of `(label, index)` pairs for label lookups in bulk.
    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}
