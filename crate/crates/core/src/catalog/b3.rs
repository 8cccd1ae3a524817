//! The explicit comultiplication table of the `Q₃` hypergroup `B₃` in the
//! basis `f₁,…,f₅, f₁₁, f₁₂, f₂₁, f₂₂`, and its comparison with the computed
//! `Δ̃`.
//!
//! The `f` basis is defined through matrix units of `C(Q₃)` for a basis of
//! matrix units that is only described up to relabeling. The comparison
//! builds matrix units from the two-dimensional representations
//! `ρ_j(a) = diag(εʲ, ε⁻ʲ)`, `ρ_j(b) = [[0, (−1)ʲ], [1, 0]]` with
//! `ε = e^{iπ/3}`, then searches the finite set of block-respecting
//! relabelings (which block is kept, index swap, off-diagonal phase) together
//! with the two readings of the normalization of `f₃, f₄, f₅`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergroup::{structure_constants, HypergroupBundle, StructureConstants};
use crate::linalg::{AlgebraElement, CMatrix};
use crate::Complex64;

/// Names of the `f` basis in table order.
pub const B3_LABELS: [&str; 9] = ["f1", "f2", "f3", "f4", "f5", "f11", "f12", "f21", "f22"];

const F1: usize = 0;
const F2: usize = 1;
const F3: usize = 2;
const F4: usize = 3;
const F5: usize = 4;
const F11: usize = 5;
const F12: usize = 6;
const F21: usize = 7;
const F22: usize = 8;

/// Term tolerance of the comparison.
pub const B3_TOL: f64 = 1e-9;

type Combo = Vec<(usize, f64)>;

fn c(terms: &[(usize, f64)]) -> Combo {
    terms.to_vec()
}

/// Adds `s·(left⊗right)` to the coefficient matrix.
fn add(m: &mut CMatrix, s: f64, left: &Combo, right: &Combo) {
    for &(i, a) in left {
        for &(j, b) in right {
            m[(i, j)] += Complex64::new(s * a * b, 0.0);
        }
    }
}

/// The transcribed table: entry `k` holds `c_{ij}` with
/// `Δ̃(f_k) = Σ c_{ij} f_i⊗f_j`.
pub fn reference_b3_table() -> Vec<CMatrix> {
    let one = |i: usize| c(&[(i, 1.0)]);
    let f12p = c(&[(F1, 1.0), (F2, 1.0)]);
    let d_plus = c(&[(F11, 1.0), (F22, 1.0)]);
    let d_minus = c(&[(F11, 1.0), (F22, -1.0)]);
    let f45p = c(&[(F4, 1.0), (F5, 1.0)]);
    let f45m = c(&[(F4, 1.0), (F5, -1.0)]);
    let mut t = vec![CMatrix::zeros(9, 9); 9];

    let m = &mut t[F1];
    add(m, 1.0, &one(F1), &one(F1));
    add(m, 1.0, &one(F2), &one(F2));
    add(m, 0.5, &one(F3), &one(F3));
    add(m, 0.25, &one(F4), &one(F4));
    add(m, 0.25, &one(F5), &one(F5));
    add(m, 0.5, &one(F11), &one(F22));
    add(m, 0.5, &one(F12), &one(F21));
    add(m, 0.5, &one(F21), &one(F12));
    add(m, 0.5, &one(F22), &one(F11));

    let m = &mut t[F2];
    add(m, 1.0, &one(F1), &one(F2));
    add(m, 0.5, &one(F3), &one(F3));
    add(m, 1.0, &one(F2), &one(F1));
    add(m, 0.25, &one(F4), &one(F4));
    add(m, 0.25, &one(F5), &one(F5));
    add(m, 0.5, &one(F11), &one(F22));
    add(m, -0.5, &one(F12), &one(F21));
    add(m, -0.5, &one(F21), &one(F12));
    add(m, 0.5, &one(F22), &one(F11));

    let m = &mut t[F3];
    add(m, 1.0, &f12p, &one(F3));
    add(m, 1.0, &one(F3), &f12p);
    add(m, 0.5, &d_plus, &one(F4));
    add(m, 0.5, &one(F4), &d_plus);
    add(m, 0.5, &d_minus, &one(F5));
    add(m, -0.5, &one(F5), &d_minus);

    let m = &mut t[F4];
    add(m, 1.0, &f12p, &one(F4));
    add(m, 1.0, &one(F4), &f12p);
    add(m, 1.0, &d_plus, &one(F3));
    add(m, 1.0, &one(F3), &d_plus);
    add(m, 0.5, &d_plus, &one(F4));
    add(m, 0.5, &one(F4), &d_plus);
    add(m, -0.5, &d_minus, &one(F5));
    add(m, 0.5, &one(F5), &d_minus);

    let m = &mut t[F5];
    add(m, 1.0, &f12p, &one(F5));
    add(m, 1.0, &one(F5), &f12p);
    add(m, -1.0, &d_minus, &one(F3));
    add(m, 1.0, &one(F3), &d_minus);
    add(m, 0.5, &d_minus, &one(F4));
    add(m, -0.5, &one(F4), &d_minus);
    add(m, -0.5, &d_plus, &one(F5));
    add(m, -0.5, &one(F5), &d_plus);

    let m = &mut t[F11];
    add(m, 1.0, &one(F1), &one(F11));
    add(m, 1.0, &one(F11), &one(F1));
    add(m, 1.0, &one(F2), &one(F11));
    add(m, 1.0, &one(F11), &one(F2));
    add(m, 0.5, &one(F3), &f45p);
    add(m, 0.5, &f45m, &one(F3));
    add(m, 1.0, &one(F22), &one(F22));
    add(m, 0.25, &f45p, &f45m);

    let m = &mut t[F12];
    add(m, 1.0, &one(F1), &one(F12));
    add(m, 1.0, &one(F12), &one(F1));
    add(m, -1.0, &one(F2), &one(F12));
    add(m, -1.0, &one(F12), &one(F2));
    add(m, 1.0, &one(F21), &one(F21));

    let m = &mut t[F21];
    add(m, 1.0, &one(F1), &one(F21));
    add(m, 1.0, &one(F21), &one(F1));
    add(m, -1.0, &one(F2), &one(F21));
    add(m, -1.0, &one(F21), &one(F2));
    add(m, 1.0, &one(F12), &one(F12));

    let m = &mut t[F22];
    add(m, 1.0, &one(F1), &one(F22));
    add(m, 1.0, &one(F22), &one(F1));
    add(m, 1.0, &one(F2), &one(F22));
    add(m, 1.0, &one(F22), &one(F2));
    add(m, 0.5, &one(F3), &f45m);
    add(m, 0.5, &f45p, &one(F3));
    add(m, 1.0, &one(F11), &one(F11));
    add(m, 0.25, &f45m, &f45p);

    t
}

/// `max_k ‖(ε⊗id)T_k − f_k‖∞` and the same for `id⊗ε`, with `ε(f₁) = 1` and
/// `ε` zero on the other basis elements.
pub fn table_counit_residual(table: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, m) in table.iter().enumerate() {
        for i in 0..9 {
            let want = if i == k { 1.0 } else { 0.0 };
            worst = worst.max((m[(F1, i)] - want).norm()).max((m[(i, F1)] - want).norm());
        }
    }
    worst
}

/// How `f₃, f₄, f₅` are scaled against the sums they are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `f₃ = e₃ + e₄`, `f₄ = e₁₁ + e₂₂`, `f₅ = e₁₂ + e₂₁`: `P(e₃) = f₃/2`.
    Unit,
    /// `f₃ = (e₃ + e₄)/4` etc., the literal reading of `2f₃ = P(e₃)`.
    Literal,
}

/// A block-respecting relabeling of the matrix units of `C(Q₃)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct B3Alignment {
    /// `j` of the block `ρ_j` whose matrix units become `f_{kl}`.
    pub kept_block: usize,
    /// Indices 1 and 2 of the kept block exchanged.
    pub kept_swap: bool,
    /// `f₁₂ = c·e₁₂`, `f₂₁ = c̄·e₂₁` with `c = i^{kept_phase}`.
    pub kept_phase: u8,
    /// `f₅ ∝ c·e₁₂ + c̄·e₂₁` in the averaged block, `c = i^{averaged_phase}`.
    pub averaged_phase: u8,
    pub normalization: Normalization,
}

/// A term on which the table and the computed `Δ̃` disagree.
#[derive(Clone, Debug, Serialize)]
pub struct B3Mismatch {
    /// `Δ̃(f_k)`, coefficient of `f_i⊗f_j`.
    pub k: String,
    pub term: String,
    pub table: [f64; 2],
    pub computed: [f64; 2],
    /// `computed / table` when it is `±2^m` for some `m ≠ 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_of_two_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct B3Comparison {
    /// `None` when no relabeling places the `f` basis inside `B`.
    pub alignment: Option<B3Alignment>,
    pub candidates_tried: usize,
    pub candidates_in_range: usize,
    pub total_terms: usize,
    pub mismatched_terms: usize,
    /// Largest coefficient difference over all 729 entries.
    pub max_residual: f64,
    /// Counit consistency of the transcribed table itself.
    pub table_counit_residual: f64,
    /// Residual of expanding `Δ̃` in the aligned `f` basis.
    pub expansion_residual: f64,
    pub mismatches: Vec<B3Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl B3Comparison {
    pub fn reproduced(&self) -> bool {
        self.alignment.is_some() && self.mismatched_terms == 0
    }
}

fn phase(k: u8) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        [k as usize % 4]
}

/// Irreducible representations of `Q₃` in the form above: the four
/// characters (trivial, `b ↦ −1`, `b ↦ i`, `b ↦ −i`) and `ρ₁`, `ρ₂`, as
/// `2×2` matrices on every element.
struct Q3Reps {
    chars: Vec<Vec<Complex64>>,
    rho: Vec<Vec<CMatrix>>,
}

fn q3_reps(h: &HypergroupBundle) -> Result<Q3Reps> {
    let g = h.group();
    let fail = |m: &str| Error::NotSpanning(format!("B₃ alignment: {m}"));
    if g.order() != 12 || g.name() != "Q3" {
        return Err(fail("the hypergroup is not built on Q3"));
    }
    let a = g.find("a").ok_or_else(|| fail("no element a"))?;
    let b = g.find("b").ok_or_else(|| fail("no element b"))?;
    let eps = |k: i64| Complex64::from_polar(1.0, PI * k as f64 / 3.0);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let gens = [a, b];

    // Breadth-first assignment along right multiplication by generators,
    // then an exhaustive homomorphism check.
    let spread = |images: [CMatrix; 2]| -> Result<Vec<CMatrix>> {
        let dim = images[0].nrows();
        let mut out: Vec<Option<CMatrix>> = vec![None; 12];
        out[0] = Some(CMatrix::identity(dim, dim));
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for (s, img) in gens.iter().zip(&images) {
                let y = g.mul(x, *s);
                if out[y].is_none() {
                    out[y] = Some(out[x].as_ref().expect("assigned") * img);
                    queue.push(y);
                }
            }
        }
        let out: Vec<CMatrix> = out.into_iter().collect::<Option<_>>().ok_or_else(|| fail("generators do not generate"))?;
        for x in 0..12 {
            for y in 0..12 {
                let d = &out[x] * &out[y] - &out[g.mul(x, y)];
                if d.iter().any(|z| z.norm() > 1e-12) {
                    return Err(fail("representation is not a homomorphism"));
                }
            }
        }
        Ok(out)
    };

    let mut chars = Vec::new();
    for (ca, cb) in [(one, one), (one, -one), (-one, i), (-one, -i)] {
        let m = spread([CMatrix::from_element(1, 1, ca), CMatrix::from_element(1, 1, cb)])?;
        chars.push(m.iter().map(|x| x[(0, 0)]).collect());
    }
    let mut rho = Vec::new();
    for j in 1..=2i64 {
        let ra = CMatrix::from_row_slice(2, 2, &[eps(j), zero, zero, eps(-j)]);
        let sign = if j % 2 == 0 { one } else { -one };
        let rb = CMatrix::from_row_slice(2, 2, &[zero, sign, one, zero]);
        rho.push(spread([ra, rb])?);
    }
    Ok(Q3Reps { chars, rho })
}

/// `e = (d/|G|) Σ_g conj(ρ(g)_{kl}) λ(g)`.
fn unit_from(h: &HypergroupBundle, entries: &[Complex64], d: f64) -> AlgebraElement {
    let g = h.group();
    let coeffs = entries.iter().map(|z| z.conj() * (d / 12.0)).collect();
    AlgebraElement::from_coeffs(g, coeffs).expect("12 coefficients")
}

fn candidate_basis(h: &HypergroupBundle, reps: &Q3Reps, al: &B3Alignment) -> Vec<AlgebraElement> {
    let chi = |k: usize| unit_from(h, &reps.chars[k], 1.0);
    let unit = |j: usize, k: usize, l: usize| {
        let entries: Vec<Complex64> = reps.rho[j - 1].iter().map(|m| m[(k, l)]).collect();
        unit_from(h, &entries, 2.0)
    };
    let kept = al.kept_block;
    let averaged = 3 - kept;
    let (p, q) = if al.kept_swap { (1, 0) } else { (0, 1) };
    let ck = phase(al.kept_phase);
    let ca = phase(al.averaged_phase);
    let s = Complex64::new(if al.normalization == Normalization::Unit { 1.0 } else { 0.25 }, 0.0);
    vec![
        chi(0),
        chi(1),
        (&chi(2) + &chi(3)).scale(s),
        (&unit(averaged, 0, 0) + &unit(averaged, 1, 1)).scale(s),
        (&unit(averaged, 0, 1).scale(ca) + &unit(averaged, 1, 0).scale(ca.conj())).scale(s),
        unit(kept, p, p),
        unit(kept, p, q).scale(ck),
        unit(kept, q, p).scale(ck.conj()),
        unit(kept, q, q),
    ]
}

fn all_alignments() -> Vec<B3Alignment> {
    let mut out = Vec::new();
    for normalization in [Normalization::Unit, Normalization::Literal] {
        for kept_block in [1, 2] {
            for kept_swap in [false, true] {
                for kept_phase in 0..4 {
                    for averaged_phase in 0..4 {
                        out.push(B3Alignment { kept_block, kept_swap, kept_phase, averaged_phase, normalization });
                    }
                }
            }
        }
    }
    out
}

fn in_range(h: &HypergroupBundle, basis: &[AlgebraElement]) -> bool {
    basis.iter().all(|b| h.element(&h.coords(b)).distance(b) <= B3_TOL)
}

/// Counts entries differing by more than the term tolerance.
fn score(sc: &StructureConstants, table: &[CMatrix]) -> (usize, f64) {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for (k, t) in table.iter().enumerate() {
        for i in 0..9 {
            for j in 0..9 {
                let d = (sc.get(i, j, k) - t[(i, j)]).norm();
                worst = worst.max(d);
                if d > B3_TOL {
                    count += 1;
                }
            }
        }
    }
    (count, worst)
}

fn power_of_two(ratio: Complex64) -> Option<f64> {
    if ratio.im.abs() > 1e-9 || ratio.re.abs() < 1e-12 {
        return None;
    }
    let e = ratio.re.abs().log2();
    let m = e.round();
    ((e - m).abs() < 1e-9 && m != 0.0).then_some(ratio.re)
}

/// Structure constants of `Δ̃` in the best aligned `f` basis, with the
/// alignment chosen.
pub fn f_basis_table(h: &HypergroupBundle) -> Result<(B3Alignment, StructureConstants)> {
    let cmp = compare_b3_table(h)?;
    let al = cmp.alignment.ok_or_else(|| Error::NotSpanning("no relabeling places the f basis inside B".into()))?;
    let reps = q3_reps(h)?;
    let sc = structure_constants(h, &candidate_basis(h, &reps, &al), B3_TOL)?;
    Ok((al, sc))
}

/// Aligns the `f` basis to `B`, expands `Δ̃` in it and itemizes every term
/// that differs from the transcribed table. Fails only when `h` is not
/// built on `Q₃`; alignment failures are part of the result.
pub fn compare_b3_table(h: &HypergroupBundle) -> Result<B3Comparison> {
    let reps = q3_reps(h)?;
    let table = reference_b3_table();
    let candidates = all_alignments();
    let mut in_b = 0;
    let mut best: Option<(usize, f64, B3Alignment, StructureConstants)> = None;
    for al in &candidates {
        let basis = candidate_basis(h, &reps, al);
        if !in_range(h, &basis) {
            continue;
        }
        let Ok(sc) = structure_constants(h, &basis, B3_TOL) else { continue };
        in_b += 1;
        let (count, worst) = score(&sc, &table);
        if best.as_ref().is_none_or(|(c, w, _, _)| (count, worst) < (*c, *w - 1e-12)) {
            best = Some((count, worst, al.clone(), sc));
        }
    }
    let table_counit = table_counit_residual(&table);
    let Some((count, worst, al, sc)) = best else {
        return Ok(B3Comparison {
            alignment: None,
            candidates_tried: candidates.len(),
            candidates_in_range: 0,
            total_terms: 729,
            mismatched_terms: 729,
            max_residual: f64::INFINITY,
            table_counit_residual: table_counit,
            expansion_residual: f64::INFINITY,
            mismatches: Vec::new(),
            note: Some("no relabeling places the f basis inside B".into()),
        });
    };
    let mut mismatches = Vec::new();
    for (k, t) in table.iter().enumerate() {
        for i in 0..9 {
            for j in 0..9 {
                let want = t[(i, j)];
                let got = sc.get(i, j, k);
                if (got - want).norm() > B3_TOL {
                    let ratio = if want.norm() > 1e-12 { power_of_two(got / want) } else { None };
                    mismatches.push(B3Mismatch {
                        k: B3_LABELS[k].to_string(),
                        term: format!("{}⊗{}", B3_LABELS[i], B3_LABELS[j]),
                        table: [want.re, want.im],
                        computed: [got.re, got.im],
                        power_of_two_ratio: ratio,
                    });
                }
            }
        }
    }
    Ok(B3Comparison {
        alignment: Some(al),
        candidates_tried: candidates.len(),
        candidates_in_range: in_b,
        total_terms: 729,
        mismatched_terms: count,
        max_residual: worst,
        table_counit_residual: table_counit,
        expansion_residual: sc.residual,
        mismatches,
        note: None,
    })
}

/// `Δ̃(f_k)` rendered as a sum of terms, for display.
pub fn render_expansion(sc: &StructureConstants, k: usize, labels: &[String], tol: f64) -> String {
    let terms = sc.expansion(k, tol);
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|&(i, j, z)| format!("{}·{}⊗{}", super::export::complex_text(z), labels[i], labels[j]))
        .collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcribed_table_is_counital() {
        assert!(table_counit_residual(&reference_b3_table()) < 1e-15);
    }

    #[test]
    fn f12_row_matches_the_stated_term_set() {
        let t = reference_b3_table();
        let m = &t[F12];
        let nz: Vec<(usize, usize, f64)> = (0..9)
            .flat_map(|i| (0..9).map(move |j| (i, j)))
            .filter(|&(i, j)| m[(i, j)].norm() > 0.0)
            .map(|(i, j)| (i, j, m[(i, j)].re))
            .collect();
        assert_eq!(nz, vec![(F1, F12, 1.0), (F2, F12, -1.0), (F12, F1, 1.0), (F12, F2, -1.0), (F21, F21, 1.0)]);
    }

    #[test]
    fn power_of_two_ratios() {
        assert_eq!(power_of_two(Complex64::new(0.5, 0.0)), Some(0.5));
        assert_eq!(power_of_two(Complex64::new(-4.0, 0.0)), Some(-4.0));
        assert_eq!(power_of_two(Complex64::new(1.0, 0.0)), None);
        assert_eq!(power_of_two(Complex64::new(3.0, 0.0)), None);
    }
}
