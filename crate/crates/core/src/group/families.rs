//! Concrete group families from explicit normal forms.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Largest permutation degree accepted; `S₆` already has 720 elements.
const MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "n", rename_all = "snake_case")]
pub enum Family {
    /// `Z_n`, elements `a^k`.
    Cyclic(usize),
    /// `Q_n` of order `4n`: `a^{2n} = e`, `b² = aⁿ`, `bab⁻¹ = a⁻¹`.
    Quasiquaternion(usize),
    /// `D_{2n} = Z_{2n} ⋊ Z_2` of order `4n`: `b² = e`, `bab⁻¹ = a⁻¹`.
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// `Z_m² ⋊ Z_2` with `s` swapping the two coordinates.
    Zm2Semidirect(usize),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cyclic(_) => "cyclic",
            Family::Quasiquaternion(_) => "quasiquaternion",
            Family::Dihedral(_) => "dihedral",
            Family::Symmetric(_) => "symmetric",
            Family::Alternating(_) => "alternating",
            Family::Zm2Semidirect(_) => "zm2_semidirect",
        }
    }

    pub fn parameter(&self) -> usize {
        match *self {
            Family::Cyclic(n)
            | Family::Quasiquaternion(n)
            | Family::Dihedral(n)
            | Family::Symmetric(n)
            | Family::Alternating(n)
            | Family::Zm2Semidirect(n) => n,
        }
    }

    /// Parses `name` as accepted by [`Family::name`].
    pub fn from_name(name: &str, n: usize) -> Result<Self> {
        Ok(match name {
            "cyclic" => Family::Cyclic(n),
            "quasiquaternion" => Family::Quasiquaternion(n),
            "dihedral" => Family::Dihedral(n),
            "symmetric" => Family::Symmetric(n),
            "alternating" => Family::Alternating(n),
            "zm2_semidirect" | "zm2" => Family::Zm2Semidirect(n),
            other => {
                return Err(Error::InvalidParameter {
                    family: "group",
                    message: format!("unknown family `{other}`"),
                })
            }
        })
    }

    pub fn expected_order(&self) -> usize {
        match *self {
            Family::Cyclic(n) => n,
            Family::Quasiquaternion(n) | Family::Dihedral(n) => 4 * n,
            Family::Symmetric(n) => (1..=n).product(),
            Family::Alternating(n) => (1..=n).product::<usize>() / 2,
            Family::Zm2Semidirect(m) => 2 * m * m,
        }
    }
}

fn out_of_range(family: &'static str, message: String) -> Error {
    Error::InvalidParameter { family, message }
}

pub fn build_family(family: Family) -> Result<FiniteGroup> {
    let group = match family {
        Family::Cyclic(n) => {
            if n < 1 {
                return Err(out_of_range("cyclic", "n must be at least 1".into()));
            }
            cyclic(n)?
        }
        Family::Quasiquaternion(n) => {
            if n < 2 {
                return Err(out_of_range("quasiquaternion", format!("n = {n}; need n ≥ 2")));
            }
            metacyclic(n, true)?
        }
        Family::Dihedral(n) => {
            if n < 2 {
                return Err(out_of_range("dihedral", format!("n = {n}; need n ≥ 2")));
            }
            metacyclic(n, false)?
        }
        Family::Symmetric(n) | Family::Alternating(n) => {
            let name = family.name();
            if n < 4 {
                return Err(out_of_range(name, format!("n = {n}; need n ≥ 4")));
            }
            if n > MAX_DEGREE {
                return Err(out_of_range(name, format!("n = {n}; degrees above {MAX_DEGREE} are not supported")));
            }
            permutation_group(n, matches!(family, Family::Alternating(_)))?
        }
        Family::Zm2Semidirect(m) => {
            if m < 3 {
                return Err(out_of_range("zm2_semidirect", format!("m = {m}; need m ≥ 3")));
            }
            zm2_semidirect(m)?
        }
    };
    debug_assert_eq!(group.order(), family.expected_order());
    Ok(group)
}

fn power_label(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let labels = (0..n)
        .map(|k| if k == 0 { "e".to_string() } else { power_label("a", k) })
        .collect();
    let mut g = FiniteGroup::from_flat(format!("Z{n}"), n, mul, Some(labels), None)?;
    if n > 1 {
        g.set_generators(vec![1]);
    }
    Ok(g)
}

/// Elements `b^s a^k` at index `s·2n + k`. With `quaternionic` set `b² = aⁿ`,
/// otherwise `b² = e`.
fn metacyclic(n: usize, quaternionic: bool) -> Result<FiniteGroup> {
    let m = 2 * n;
    let order = 2 * m;
    let shift = if quaternionic { n } else { 0 };
    let mut mul = vec![0; order * order];
    for x in 0..order {
        let (s, k) = (x / m, x % m);
        for y in 0..order {
            let (t, l) = (y / m, y % m);
            // b^s a^k b^t a^l = b^{s+t} a^{(-1)^t k + l}
            let ka = if t == 1 { (m - k) % m } else { k };
            let mut e = ka + l;
            if s + t == 2 {
                e += shift;
            }
            mul[x * order + y] = ((s + t) % 2) * m + e % m;
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (s, k) = (x / m, x % m);
            match (s, k) {
                (0, 0) => "e".to_string(),
                (0, k) => power_label("a", k),
                (_, k) => format!("b{}", power_label("a", k)),
            }
        })
        .collect();
    let name = if quaternionic { format!("Q{n}") } else { format!("D{}", 2 * m) };
    let mut g = FiniteGroup::from_flat(name, order, mul, Some(labels), None)?;
    g.set_generators(vec![1, m]);
    Ok(g)
}

fn permutation_label(p: &[usize]) -> String {
    let sep = if p.len() > 9 { "," } else { "" };
    p.iter().map(|&x| (x + 1).to_string()).collect::<Vec<_>>().join(sep)
}

fn is_even(p: &[usize]) -> bool {
    let inversions: usize =
        (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum();
    inversions.is_multiple_of(2)
}

/// Lexicographic successor; false once `p` is the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `S_n` or `A_n` in lexicographic one-line order; product is composition
/// `(στ)(x) = σ(τ(x))`.
fn permutation_group(n: usize, even_only: bool) -> Result<FiniteGroup> {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        if !even_only || is_even(&p) {
            perms.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    let index: HashMap<&[usize], usize> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let order = perms.len();
    let mut mul = vec![0; order * order];
    let mut buf = vec![0; n];
    for (i, s) in perms.iter().enumerate() {
        for (j, t) in perms.iter().enumerate() {
            for x in 0..n {
                buf[x] = s[t[x]];
            }
            mul[i * order + j] = index[buf.as_slice()];
        }
    }
    let labels = perms.iter().map(|p| permutation_label(p)).collect();
    let name = if even_only { format!("A{n}") } else { format!("S{n}") };
    let gens = if even_only {
        None
    } else {
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
        Some(vec![index[transposition.as_slice()], index[cycle.as_slice()]])
    };
    drop(index);
    let mut g = FiniteGroup::from_flat(name, order, mul, Some(labels), Some(perms))?;
    if let Some(gens) = gens {
        g.set_generators(gens);
    }
    Ok(g)
}

/// Elements `(x, y)s^t` at index `t·m² + x·m + y`.
fn zm2_semidirect(m: usize) -> Result<FiniteGroup> {
    let sq = m * m;
    let order = 2 * sq;
    let mut mul = vec![0; order * order];
    for a in 0..order {
        let (t1, x1, y1) = (a / sq, (a % sq) / m, a % m);
        for b in 0..order {
            let (t2, mut x2, mut y2) = (b / sq, (b % sq) / m, b % m);
            if t1 == 1 {
                std::mem::swap(&mut x2, &mut y2);
            }
            mul[a * order + b] = ((t1 + t2) % 2) * sq + ((x1 + x2) % m) * m + (y1 + y2) % m;
        }
    }
    let labels = (0..order)
        .map(|a| {
            let (t, x, y) = (a / sq, (a % sq) / m, a % m);
            format!("({x},{y}){}", if t == 1 { "s" } else { "" })
        })
        .collect();
    let mut g = FiniteGroup::from_flat(format!("Z{m}^2xZ2"), order, mul, Some(labels), None)?;
    g.set_generators(vec![m, sq]);
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quasiquaternion_relations() {
        for n in 2..=6 {
            let g = build_family(Family::Quasiquaternion(n)).unwrap();
            assert_eq!(g.order(), 4 * n);
            let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
            assert_eq!(g.mul(b, b), g.pow(a, n));
            assert_eq!(g.mul(g.mul(b, a), g.inv(b)), g.inv(a));
            assert_eq!(g.element_order(b), 4);
        }
    }

    #[test]
    fn dihedral_relations() {
        let g = build_family(Family::Dihedral(4)).unwrap();
        assert_eq!(g.order(), 16);
        let (a, b) = (g.find("a").unwrap(), g.find("b").unwrap());
        assert_eq!(g.mul(b, b), 0);
        assert_eq!(g.element_order(a), 8);
        assert_eq!(g.mul(g.mul(b, a), b), g.inv(a));
    }

    #[test]
    fn orders() {
        assert_eq!(build_family(Family::Zm2Semidirect(3)).unwrap().order(), 18);
        assert_eq!(build_family(Family::Cyclic(1)).unwrap().order(), 1);
        assert_eq!(build_family(Family::Symmetric(4)).unwrap().order(), 24);
        assert_eq!(build_family(Family::Alternating(5)).unwrap().order(), 60);
    }

    #[test]
    fn permutation_labels_and_composition() {
        let s4 = build_family(Family::Symmetric(4)).unwrap();
        assert_eq!(s4.label(0), "1234");
        let c = s4.find("2341").unwrap();
        assert_eq!(s4.element_order(c), 4);
        // (12)(23) = (123) under right-to-left composition.
        let t12 = s4.find("2134").unwrap();
        let t23 = s4.find("1324").unwrap();
        assert_eq!(s4.label(s4.mul(t12, t23)), "2314");
        assert!(s4.permutation(c).is_some());
    }

    #[test]
    fn rejects_out_of_range() {
        for f in [
            Family::Quasiquaternion(1),
            Family::Dihedral(1),
            Family::Symmetric(3),
            Family::Alternating(3),
            Family::Zm2Semidirect(2),
            Family::Cyclic(0),
        ] {
            let err = build_family(f).unwrap_err();
            assert!(err.to_string().contains(f.name()), "{err}");
        }
    }

    #[test]
    fn zm2_swap_action() {
        let g = build_family(Family::Zm2Semidirect(3)).unwrap();
        let s = g.find("(0,0)s").unwrap();
        let x = g.find("(1,0)").unwrap();
        assert_eq!(g.label(g.mul(g.mul(s, x), s)), "(0,1)");
        assert_eq!(g.label(g.mul(x, s)), "(1,0)s");
    }
}
