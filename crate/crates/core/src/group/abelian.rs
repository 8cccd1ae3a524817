//! Abelian subgroups and their character groups.
//!
//! Characters are stored as integer phases modulo the exponent `e` of `H`,
//! so `⟨ĥ, h⟩ = exp(2πi·phase/e)`. Values that are fourth roots of unity are
//! produced exactly.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{FiniteGroup, GroupAutomorphism};
use crate::error::{Error, Result};

/// `exp(2πi·num/den)`, exact when the value is one of `±1, ±i`.
pub fn root_of_unity(num: usize, den: usize) -> Complex64 {
    let num = num % den;
    if (4 * num).is_multiple_of(den) {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * num as f64 / den as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbelianSubgroup {
    /// Parent-group indices; `elements[0]` is the identity.
    elements: Vec<usize>,
    exponent: usize,
    /// `phases[χ][j]`: phase of character `χ` at `elements[j]`.
    phases: Vec<Vec<usize>>,
    dual_mul: Vec<usize>,
    dual_inv: Vec<usize>,
    dual_labels: Vec<String>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_abelian_subgroup(g: &FiniteGroup, subset: &[usize]) -> Result<()> {
    if !g.is_subgroup(subset) {
        return Err(Error::NotAbelianSubgroup("subset is not closed under products and inverses".into()));
    }
    for &a in subset {
        for &b in subset {
            if !g.commute(a, b) {
                return Err(Error::NotAbelianSubgroup(format!(
                    "{} and {} do not commute",
                    g.label(a),
                    g.label(b)
                )));
            }
        }
    }
    Ok(())
}

impl AbelianSubgroup {
    fn finish(
        elements: Vec<usize>,
        exponent: usize,
        phases: Vec<Vec<usize>>,
        dual_labels: Vec<String>,
    ) -> Self {
        let k = phases.len();
        let lookup: HashMap<&[usize], usize> =
            phases.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut dual_mul = vec![0; k * k];
        let mut dual_inv = vec![0; k];
        let mut buf = vec![0; elements.len()];
        for x in 0..k {
            for y in 0..k {
                for j in 0..elements.len() {
                    buf[j] = (phases[x][j] + phases[y][j]) % exponent;
                }
                dual_mul[x * k + y] = lookup[buf.as_slice()];
            }
            for j in 0..elements.len() {
                buf[j] = (exponent - phases[x][j]) % exponent;
            }
            dual_inv[x] = lookup[buf.as_slice()];
        }
        AbelianSubgroup { elements, exponent, phases, dual_mul, dual_inv, dual_labels }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Position of a parent-group element inside `elements`.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.iter().position(|&h| h == g)
    }

    /// `⟨χ, elements[j]⟩`.
    pub fn character(&self, chi: usize, j: usize) -> Complex64 {
        root_of_unity(self.phases[chi][j], self.exponent)
    }

    /// Full `|H|×|H|` table, rows indexed by characters.
    pub fn character_table(&self) -> Vec<Vec<Complex64>> {
        (0..self.order())
            .map(|c| (0..self.order()).map(|j| self.character(c, j)).collect())
            .collect()
    }

    pub fn dual_mul(&self, x: usize, y: usize) -> usize {
        self.dual_mul[x * self.order() + y]
    }

    pub fn dual_inv(&self, x: usize) -> usize {
        self.dual_inv[x]
    }

    pub fn dual_label(&self, x: usize) -> &str {
        &self.dual_labels[x]
    }

    /// Character index of the trivial character (always 0).
    pub const fn trivial_character(&self) -> usize {
        0
    }

    /// Induced action on the dual group, `(α·χ)(h) = χ(α⁻¹h)`. `None` when `α`
    /// does not preserve `H`.
    pub fn dual_action(&self, alpha: &GroupAutomorphism) -> Option<Vec<usize>> {
        let inv = alpha.inverse();
        let pull: Vec<usize> = self
            .elements
            .iter()
            .map(|&h| self.position(inv.apply(h)))
            .collect::<Option<_>>()?;
        if self.elements.iter().any(|&h| self.position(alpha.apply(h)).is_none()) {
            return None;
        }
        let lookup: HashMap<&[usize], usize> =
            self.phases.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut out = Vec::with_capacity(self.order());
        for p in &self.phases {
            let moved: Vec<usize> = pull.iter().map(|&j| p[j]).collect();
            out.push(lookup[moved.as_slice()]);
        }
        Some(out)
    }
}

/// Dual group of an abelian subgroup given as an arbitrary index subset.
///
/// Characters are found by assigning phases to a greedy generating set and
/// keeping the consistent assignments; they are ordered lexicographically by
/// those phases. Elements are listed in increasing parent index.
pub fn abelian_dual(g: &FiniteGroup, subset: &[usize]) -> Result<AbelianSubgroup> {
    let mut elements = subset.to_vec();
    elements.sort_unstable();
    elements.dedup();
    check_abelian_subgroup(g, &elements)?;
    let gens = g.greedy_generators(&elements);
    let orders: Vec<usize> = gens.iter().map(|&s| g.element_order(s)).collect();
    let exponent = orders.iter().fold(1, |acc, &o| acc / gcd(acc, o) * o);
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &h)| (h, i)).collect();

    let mut phases = Vec::new();
    let mut labels = Vec::new();
    let mut assignment = vec![0usize; gens.len()];
    loop {
        let admissible = gens
            .iter()
            .enumerate()
            .all(|(i, _)| (orders[i] * assignment[i]).is_multiple_of(exponent));
        if admissible {
            if let Some(p) = propagate(g, &elements, &pos, &gens, &assignment, exponent) {
                phases.push(p);
                labels.push(format!(
                    "chi({})",
                    assignment.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
                ));
            }
        }
        // Odometer over assignments in Z_e^r, last coordinate fastest.
        let mut i = gens.len();
        loop {
            if i == 0 {
                let sub = AbelianSubgroup::finish(elements, exponent, phases, labels);
                if sub.phases.len() != sub.elements.len() {
                    return Err(Error::Numerical("character enumeration incomplete".into()));
                }
                return Ok(sub);
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < exponent {
                break;
            }
            assignment[i] = 0;
        }
    }
}

fn propagate(
    g: &FiniteGroup,
    elements: &[usize],
    pos: &HashMap<usize, usize>,
    gens: &[usize],
    assignment: &[usize],
    exponent: usize,
) -> Option<Vec<usize>> {
    let mut phase = vec![usize::MAX; elements.len()];
    phase[0] = 0;
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for (i, &s) in gens.iter().enumerate() {
            let y = pos[&g.mul(elements[x], s)];
            let v = (phase[x] + assignment[i]) % exponent;
            if phase[y] == usize::MAX {
                phase[y] = v;
                queue.push(y);
            } else if phase[y] != v {
                return None;
            }
        }
    }
    Some(phase)
}

/// Dual group of `H = ⟨g₁⟩ × … × ⟨g_r⟩` for an explicit basis.
///
/// Elements are `g₁^{j₁}⋯g_r^{j_r}` in lexicographic order of `(j₁,…,j_r)`;
/// character `(k₁,…,k_r)` is the one with `⟨k, gᵢ⟩ = exp(2πi kᵢ/nᵢ)`, also in
/// lexicographic order. Hence the character of index `(0,…,1,…,0)` is the
/// dual basis vector of `gᵢ`.
pub fn abelian_dual_with_basis(g: &FiniteGroup, basis: &[usize]) -> Result<AbelianSubgroup> {
    let orders: Vec<usize> = basis.iter().map(|&s| g.element_order(s)).collect();
    let size: usize = orders.iter().product();
    let tuples = lex_tuples(&orders);
    let mut elements = Vec::with_capacity(size);
    for t in &tuples {
        let x = t.iter().zip(basis).fold(0, |acc, (&j, &s)| g.mul(acc, g.pow(s, j)));
        elements.push(x);
    }
    let mut sorted = elements.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != size {
        return Err(Error::NotAbelianSubgroup("basis elements are not independent".into()));
    }
    check_abelian_subgroup(g, &sorted)?;
    let exponent = orders.iter().fold(1, |acc, &o| acc / gcd(acc, o) * o);
    let phases = tuples
        .iter()
        .map(|k| {
            tuples
                .iter()
                .map(|j| {
                    k.iter()
                        .zip(j)
                        .zip(&orders)
                        .map(|((&ki, &ji), &ni)| ki * ji * (exponent / ni))
                        .sum::<usize>()
                        % exponent
                })
                .collect()
        })
        .collect();
    let labels = tuples
        .iter()
        .map(|k| {
            let parts: Vec<String> = k
                .iter()
                .zip(basis)
                .filter(|(&ki, _)| ki > 0)
                .map(|(&ki, &s)| {
                    if ki == 1 {
                        format!("^{}", g.label(s))
                    } else {
                        format!("^{}^{ki}", g.label(s))
                    }
                })
                .collect();
            if parts.is_empty() {
                "^e".to_string()
            } else {
                parts.join("")
            }
        })
        .collect();
    Ok(AbelianSubgroup::finish(elements, exponent, phases, labels))
}

fn lex_tuples(orders: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..n).map(move |j| {
                    let mut u = t.clone();
                    u.push(j);
                    u
                })
            })
            .collect();
    }
    out
}
