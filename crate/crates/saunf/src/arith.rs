//! Arithmetic benchmark families built on n-bit unsigned multiplication.
//!
//! Three constructions live here, all over a fixed variable layout:
//!
//! * an array multiplier producing the `2n` product bits of `X × Y` as a
//!   shared function DAG ([`build_multiplier`]);
//! * bit-slice specifications `R(l, j)` — "bits `l..=j` of the product
//!   equal the corresponding bits of a `2n`-bit input word `I`" — with
//!   closed-form Skolem vectors for every slice narrower than the word
//!   width, and normal-form witnesses derived from those vectors
//!   ([`build_rlj`], [`skolem_for_rlj`], [`saunf_for_rlj`]);
//! * bitwise division by an odd number: a recurrence that recovers `X`
//!   from `I = X × Y` one bit at a time ([`odd_division_skolem`]).
//!
//! Bit indexing is 1-based and least-significant-first throughout: bit
//! `k` of a word carries weight `2^(k−1)`. The variable layout for word
//! width `n` is `x_k ↦ k`, `y_k ↦ n + k` (`k ≤ n`), and `i_k ↦ 2n + k`
//! (`k ≤ 2n`); see [`x_var`], [`y_var`], [`i_var`].

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::circuit::{Assignment, Circuit, Literal, Spec, VarId};
use crate::normal_form::SaunfWitness;
use crate::sat::oracle::Oracle;
use crate::synthesis::{
    saunf_from_skolem, FuncArena, FuncId, SizeReport, SkolemVector, SynthesisError,
};

/// Errors from the benchmark generators.
#[derive(Debug, Error)]
pub enum ArithError {
    /// Slice bounds outside `1 ≤ l ≤ j ≤ 2n`.
    #[error("slice bounds must satisfy 1 <= l <= j <= 2n (got n={n}, l={l}, j={j})")]
    SliceBounds { n: u32, l: u32, j: u32 },
    /// A closed-form Skolem vector exists only for slices spanning
    /// fewer than `n` positions beyond their base (`j − l < n`).
    #[error("no closed-form Skolem vector for slices with j - l >= n (got n={n}, l={l}, j={j})")]
    SliceTooWide { n: u32, l: u32, j: u32 },
    /// Failure propagated from Skolem verification or the normal-form
    /// construction.
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
}

/// Variable carrying bit `k` (1-based) of the output word `X`.
pub fn x_var(n: u32, k: u32) -> VarId {
    debug_assert!(1 <= k && k <= n);
    VarId(k)
}

/// Variable carrying bit `k` (1-based) of the word `Y`.
pub fn y_var(n: u32, k: u32) -> VarId {
    debug_assert!(1 <= k && k <= n);
    VarId(n + k)
}

/// Variable carrying bit `k` (1-based) of the `2n`-bit input word `I`.
pub fn i_var(n: u32, k: u32) -> VarId {
    debug_assert!(1 <= k && k <= 2 * n);
    VarId(2 * n + k)
}

/// A validated slice `l..=j` of the `2n`-bit product for word width `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slice {
    n: u32,
    l: u32,
    j: u32,
}

impl Slice {
    /// Checks `1 ≤ l ≤ j ≤ 2n`.
    pub fn new(n: u32, l: u32, j: u32) -> Result<Slice, ArithError> {
        if n == 0 || l == 0 || l > j || j > 2 * n {
            return Err(ArithError::SliceBounds { n, l, j });
        }
        Ok(Slice { n, l, j })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Number of bit positions the slice covers.
    pub fn width(&self) -> u32 {
        self.j - self.l + 1
    }

    /// Whether `j − l < n` — the slices for which a closed-form Skolem
    /// vector exists.
    pub fn narrow(&self) -> bool {
        self.j - self.l < self.n
    }
}

/// Every valid slice with `j − l < n`, in lexicographic `(l, j)` order.
pub fn narrow_slices(n: u32) -> Vec<Slice> {
    let mut out = Vec::new();
    for l in 1..=2 * n {
        for j in l..=(2 * n).min(l + n - 1) {
            out.push(Slice { n, l, j });
        }
    }
    out
}

/// Exclusive or, lowered to AND/OR over the operands and their duals.
fn xor(arena: &mut FuncArena, a: FuncId, b: FuncId) -> FuncId {
    let na = arena.dual(a);
    let nb = arena.dual(b);
    let a_only = arena.and(a, nb);
    let b_only = arena.and(na, b);
    arena.or(a_only, b_only)
}

/// Sum and carry bits of `a + b + c`.
fn full_add(arena: &mut FuncArena, a: FuncId, b: FuncId, c: FuncId) -> (FuncId, FuncId) {
    let ab = xor(arena, a, b);
    let sum = xor(arena, ab, c);
    let ab2 = arena.and(a, b);
    let ac = arena.and(a, c);
    let bc = arena.and(b, c);
    let carry = arena.or_all(&[ab2, ac, bc]);
    (sum, carry)
}

/// Array multiplication of two little-endian function vectors: one
/// ripple-carry row per multiplicand bit. The result has
/// `xs.len() + ys.len()` bits, which always accommodates the product.
fn multiply(arena: &mut FuncArena, xs: &[FuncId], ys: &[FuncId]) -> Vec<FuncId> {
    let bot = arena.constant(false);
    let mut bits = vec![bot; xs.len() + ys.len()];
    for (r, &xr) in xs.iter().enumerate() {
        let mut carry = bot;
        for (c, &yc) in ys.iter().enumerate() {
            let partial = arena.and(xr, yc);
            let (sum, out) = full_add(arena, bits[r + c], partial, carry);
            bits[r + c] = sum;
            carry = out;
        }
        // Row r writes positions r .. r + ys.len() − 1, so its carry
        // lands on a position no earlier row has touched.
        bits[r + ys.len()] = arena.or(bits[r + ys.len()], carry);
    }
    bits
}

/// One conjunct per slice position `k`: product bit `k` agrees with the
/// input bit `i_k`.
fn match_conjuncts(
    arena: &mut FuncArena,
    bits: &[FuncId],
    n: u32,
    l: u32,
    j: u32,
) -> Vec<FuncId> {
    let mut out = Vec::with_capacity((j - l + 1) as usize);
    for k in l..=j {
        let p = bits[(k - 1) as usize];
        let np = arena.dual(p);
        let ik = arena.leaf(Literal::positive(i_var(n, k)));
        let nik = arena.leaf(Literal::negative(i_var(n, k)));
        let both_true = arena.and(p, ik);
        let both_false = arena.and(np, nik);
        out.push(arena.or(both_true, both_false));
    }
    out
}

/// The `2n` product bits of `X × Y` for word width `n`, held as one
/// shared DAG so slice specifications can reuse common structure.
pub struct Multiplier {
    n: u32,
    arena: FuncArena,
    bits: Vec<FuncId>,
}

/// Builds the array multiplier for word width `n ≥ 1`. Total shared
/// size is O(n²): one constant-size adder cell per bit pair.
pub fn build_multiplier(n: u32) -> Multiplier {
    assert!(n >= 1, "word width must be at least 1");
    let mut arena = FuncArena::new();
    let xs: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(x_var(n, k)))).collect();
    let ys: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(y_var(n, k)))).collect();
    let bits = multiply(&mut arena, &xs, &ys);
    Multiplier { n, arena, bits }
}

impl Multiplier {
    /// Word width of the operands.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Product bit `k` (1-based, `k ≤ 2n`) as a standalone circuit over
    /// the `x` and `y` variables.
    pub fn product_bit(&self, k: u32) -> Circuit {
        assert!(1 <= k && k <= 2 * self.n, "product bit out of range");
        self.arena.emit_circuit(self.bits[(k - 1) as usize])
    }

    /// All `2n` product-bit circuits, least significant first.
    pub fn product_bits(&self) -> Vec<Circuit> {
        (1..=2 * self.n).map(|k| self.product_bit(k)).collect()
    }

    /// Nodes of the shared DAG reachable from any product bit.
    pub fn shared_size(&self) -> usize {
        self.arena.reachable_size(&self.bits)
    }
}

/// The slice specification `R(l, j)`: true iff bits `l..=j` of `X × Y`
/// match bits `l..=j` of `I`. Outputs are the `x` then `y` bits in
/// ascending order; inputs are all `2n` bits of `I`.
pub fn build_rlj(n: u32, l: u32, j: u32) -> Result<Spec, ArithError> {
    Slice::new(n, l, j)?;
    let Multiplier { mut arena, bits, .. } = build_multiplier(n);
    let conjuncts = match_conjuncts(&mut arena, &bits, n, l, j);
    let root = arena.and_all(&conjuncts);
    let circuit = arena.emit_circuit(root);
    let inputs: BTreeSet<VarId> = (1..=2 * n).map(|k| i_var(n, k)).collect();
    let outputs: Vec<VarId> =
        (1..=n).map(|k| x_var(n, k)).chain((1..=n).map(|k| y_var(n, k))).collect();
    Ok(Spec::new(circuit, inputs, outputs, BTreeSet::new())
        .expect("the x, y, and i variable families are pairwise disjoint"))
}

/// Closed-form Skolem vector for `R(l, j)` with `j − l < n`: constant
/// `X`, and `Y` copied (shifted) from the constrained `I` bits.
///
/// * `l ≤ n`: `X = 2^(l−1)`, `y_k = i_(k+l−1)` for `k ≤ j+1−l`, else ⊥.
///   The product is `Y` shifted by `l−1`, so bits `l..=j` spell the
///   copied input bits directly.
/// * `l > n` and `j < 2n`: `X = 2^(n−1)`, `y_k = i_(k+n−1)` for
///   `l−n < k ≤ j+1−n`, else ⊥ — the same shift argument, moved up.
/// * `l > n` and `j = 2n`: the shift above cannot pin product bit `2n`
///   (an n-bit `Y` shifted by `n−1` leaves it clear), so `X = 2^n − 1`
///   is used instead. For `Y ≥ 1`,
///   `(2^n − 1)·Y = (Y−1)·2^n + (2^n − Y)`, so the high `n` product
///   bits spell `Y − 1`. Taking `Y = D + 1`, where `D` copies the
///   constrained bits (`d_k = i_(k+n)` for `k ≥ l−n`, lower bits ⊥) and
///   the increment is a carry chain, pins bits `l..=2n` whenever any
///   `X, Y` could: the sole overflow case `D = 2^n − 1` would demand a
///   product of at least `2^2n − 2^n`, beyond the `(2^n − 1)²` maximum,
///   so the specification is unsatisfiable there and any output serves.
pub fn skolem_for_rlj(n: u32, l: u32, j: u32) -> Result<SkolemVector, ArithError> {
    let slice = Slice::new(n, l, j)?;
    if !slice.narrow() {
        return Err(ArithError::SliceTooWide { n, l, j });
    }
    let mut arena = FuncArena::new();
    let bot = arena.constant(false);
    let top = arena.constant(true);
    let mut xs: Vec<FuncId> = Vec::with_capacity(n as usize);
    let mut ys: Vec<FuncId> = Vec::with_capacity(n as usize);
    if l <= n {
        for k in 1..=n {
            xs.push(if k == l { top } else { bot });
        }
        for k in 1..=n {
            ys.push(if k <= j + 1 - l {
                arena.leaf(Literal::positive(i_var(n, k + l - 1)))
            } else {
                bot
            });
        }
    } else if j < 2 * n {
        for k in 1..=n {
            xs.push(if k == n { top } else { bot });
        }
        for k in 1..=n {
            ys.push(if l - n < k && k <= j + 1 - n {
                arena.leaf(Literal::positive(i_var(n, k + n - 1)))
            } else {
                bot
            });
        }
    } else {
        for _ in 1..=n {
            xs.push(top);
        }
        let mut carry = top;
        for k in 1..=n {
            let d = if k >= l - n {
                arena.leaf(Literal::positive(i_var(n, k + n)))
            } else {
                bot
            };
            ys.push(xor(&mut arena, d, carry));
            carry = arena.and(d, carry);
        }
    }
    let entries: Vec<(VarId, FuncId)> = (1..=n)
        .map(|k| (x_var(n, k), xs[(k - 1) as usize]))
        .chain((1..=n).map(|k| (y_var(n, k), ys[(k - 1) as usize])))
        .collect();
    let params: BTreeSet<VarId> = (1..=2 * n).map(|k| i_var(n, k)).collect();
    Ok(SkolemVector::from_functions(arena, entries, params, BTreeMap::new())
        .expect("closed-form components read only the i bits"))
}

/// Normal-form witness for `R(l, j)` (with `j − l < n`), constructed
/// from the closed-form vector. The witness circuit stays within the
/// reported bound `g + psi + 12m + 8`, hence polynomial in `n`.
pub fn saunf_for_rlj(
    n: u32,
    l: u32,
    j: u32,
    oracle: &Oracle,
) -> Result<(SaunfWitness, SizeReport), ArithError> {
    let spec = build_rlj(n, l, j)?;
    let psi = skolem_for_rlj(n, l, j)?;
    Ok(saunf_from_skolem(&spec, &psi, oracle)?)
}

/// Division by an odd number, as a relation: `X × Y = I` (all `2n`
/// product bits match) conjoined with the parity guard `i_1 ∧ y_1`, so
/// the relation evaluates to ⊥ whenever `I` or `Y` is even. Outputs are
/// the `x` bits; `Y` and `I` are inputs.
pub fn odd_division_spec(n: u32) -> Spec {
    assert!(n >= 1, "word width must be at least 1");
    let mut arena = FuncArena::new();
    let xs: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(x_var(n, k)))).collect();
    let ys: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(y_var(n, k)))).collect();
    let bits = multiply(&mut arena, &xs, &ys);
    let mut conjuncts = match_conjuncts(&mut arena, &bits, n, 1, 2 * n);
    conjuncts.push(arena.leaf(Literal::positive(i_var(n, 1))));
    conjuncts.push(arena.leaf(Literal::positive(y_var(n, 1))));
    let root = arena.and_all(&conjuncts);
    let circuit = arena.emit_circuit(root);
    let inputs: BTreeSet<VarId> =
        (1..=n).map(|k| y_var(n, k)).chain((1..=2 * n).map(|k| i_var(n, k))).collect();
    let outputs: Vec<VarId> = (1..=n).map(|k| x_var(n, k)).collect();
    Spec::new(circuit, inputs, outputs, BTreeSet::new())
        .expect("the x, y, and i variable families are pairwise disjoint")
}

/// Skolem vector for the quotient in [`odd_division_spec`]: recovers
/// `X` from `I = X × Y` bit by bit when `Y` (and hence `I`) is odd.
///
/// With `y_1 = 1`, bit `i` of `X × Y` equals
/// `x_i ⊕ (X_(1..i−1) × Y_(1..i))_i` — the prefix product is unaffected
/// by higher `Y` bits at position `i`. Solving for `x_i`:
///
/// * `ψ_(x_1) = ⊤` (an odd `I` forces an odd quotient), and
/// * `ψ_(x_i) = i_i ⊕ (Ψ_(1..i−1) × Y_(1..i))_i` for `i ≥ 2`,
///
/// where the prefix product is built over the previously constructed
/// components inside one shared DAG. The quotient is unique modulo
/// `2^n` because an odd `Y` is coprime to it.
pub fn odd_division_skolem(n: u32) -> SkolemVector {
    assert!(n >= 1, "word width must be at least 1");
    let mut arena = FuncArena::new();
    let y_bits: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(y_var(n, k)))).collect();
    let mut quotient: Vec<FuncId> = vec![arena.constant(true)];
    for i in 2..=n {
        let prefix =
            multiply(&mut arena, &quotient[..(i - 1) as usize], &y_bits[..i as usize]);
        let bit = prefix[(i - 1) as usize];
        let ii = arena.leaf(Literal::positive(i_var(n, i)));
        let next = xor(&mut arena, ii, bit);
        quotient.push(next);
    }
    let entries: Vec<(VarId, FuncId)> = quotient
        .iter()
        .enumerate()
        .map(|(k, &f)| (x_var(n, k as u32 + 1), f))
        .collect();
    let params: BTreeSet<VarId> =
        (1..=n).map(|k| y_var(n, k)).chain((1..=2 * n).map(|k| i_var(n, k))).collect();
    SkolemVector::from_functions(arena, entries, params, BTreeMap::new())
        .expect("division components read only the y and i bits")
}

/// The full factorization relation `X × Y = I ∧ X ≠ 1 ∧ Y ≠ 1`,
/// constructible for experimentation. No normal-form or closed-form
/// claim attaches to it — only the narrow slices of [`build_rlj`] admit
/// those.
pub fn factorization_spec(n: u32) -> Spec {
    assert!(n >= 1, "word width must be at least 1");
    let mut arena = FuncArena::new();
    let xs: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(x_var(n, k)))).collect();
    let ys: Vec<FuncId> =
        (1..=n).map(|k| arena.leaf(Literal::positive(y_var(n, k)))).collect();
    let bits = multiply(&mut arena, &xs, &ys);
    let mut conjuncts = match_conjuncts(&mut arena, &bits, n, 1, 2 * n);
    for vars in [
        (1..=n).map(|k| x_var(n, k)).collect::<Vec<_>>(),
        (1..=n).map(|k| y_var(n, k)).collect(),
    ] {
        // "Not the encoding of one": the low bit clear or any high bit set.
        let mut differs: Vec<FuncId> = vec![arena.leaf(Literal::negative(vars[0]))];
        for &v in &vars[1..] {
            differs.push(arena.leaf(Literal::positive(v)));
        }
        let not_one = arena.or_all(&differs);
        conjuncts.push(not_one);
    }
    let root = arena.and_all(&conjuncts);
    let circuit = arena.emit_circuit(root);
    let inputs: BTreeSet<VarId> = (1..=2 * n).map(|k| i_var(n, k)).collect();
    let outputs: Vec<VarId> =
        (1..=n).map(|k| x_var(n, k)).chain((1..=n).map(|k| y_var(n, k))).collect();
    Spec::new(circuit, inputs, outputs, BTreeSet::new())
        .expect("the x, y, and i variable families are pairwise disjoint")
}

/// Bit `k` (1-based) of `v`.
fn bit(v: u64, k: u32) -> bool {
    (v >> (k - 1)) & 1 == 1
}

/// The value of bits `l..=j` of `v`, shifted down to weight one.
fn slice_value(v: u64, l: u32, j: u32) -> u64 {
    (v >> (l - 1)) & ((1u64 << (j - l + 1)) - 1)
}

/// Binds `width` bits of `value` to the variables `var(1..=width)`.
fn assign_bits(sigma: &mut Assignment, var: impl Fn(u32) -> VarId, width: u32, value: u64) {
    for k in 1..=width {
        sigma.insert(var(k), bit(value, k));
    }
}

/// Reads a vector's components for `vars` back as an integer.
///
/// Every listed variable must have a component in `psi`.
fn vector_value(psi: &SkolemVector, vars: &[VarId], sigma: &Assignment) -> u64 {
    let mut out = 0u64;
    for (pos, &v) in vars.iter().enumerate() {
        if psi.evaluate(v, sigma).expect("component present") {
            out |= 1 << pos;
        }
    }
    out
}

/// Ground-truth audit of a Skolem vector for `R(l, j)` by exhaustive
/// enumeration: for every input word `I` that some `(X, Y)` can match,
/// the vector's own choice must match too.
///
/// The vector must carry components for all `2n` of the `x` and `y`
/// variables. Cost is `2^(2n)` words times a `4^n` solvability scan
/// per word, so this is only for small widths; solver-backed
/// verification covers the rest.
pub fn exhaustive_slice_check(
    n: u32,
    l: u32,
    j: u32,
    psi: &SkolemVector,
) -> Result<bool, ArithError> {
    Slice::new(n, l, j)?;
    let x_vars: Vec<VarId> = (1..=n).map(|k| x_var(n, k)).collect();
    let y_vars: Vec<VarId> = (1..=n).map(|k| y_var(n, k)).collect();
    for i in 0..1u64 << (2 * n) {
        let mut sigma = Assignment::new();
        assign_bits(&mut sigma, |k| i_var(n, k), 2 * n, i);
        let solvable = (0..1u64 << n)
            .any(|x| (0..1u64 << n).any(|y| slice_value(x * y, l, j) == slice_value(i, l, j)));
        if !solvable {
            continue;
        }
        let x = vector_value(psi, &x_vars, &sigma);
        let y = vector_value(psi, &y_vars, &sigma);
        if slice_value(x * y, l, j) != slice_value(i, l, j) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ground-truth audit of a division vector by exhaustive enumeration:
/// for every `(Y, I)` pair that admits a quotient — `Y` odd, `I` an odd
/// exact multiple — the vector must produce that quotient.
///
/// The vector must carry components for all `n` of the `x` variables.
/// Cost is `2^(3n)` pairs with a `2^n` quotient scan per pair.
pub fn exhaustive_division_check(n: u32, psi: &SkolemVector) -> bool {
    let x_vars: Vec<VarId> = (1..=n).map(|k| x_var(n, k)).collect();
    for y in 0..1u64 << n {
        for i in 0..1u64 << (2 * n) {
            let solution = (0..1u64 << n).find(|&x| x * y == i && i % 2 == 1);
            let Some(x) = solution else { continue };
            let mut sigma = Assignment::new();
            assign_bits(&mut sigma, |k| y_var(n, k), n, y);
            assign_bits(&mut sigma, |k| i_var(n, k), 2 * n, i);
            if vector_value(psi, &x_vars, &sigma) != x {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::SaunfVerdict;
    use crate::synthesis::{sk_gen, verify_skolem};

    /// Assignment with `X`, `Y`, and `I` all bound (factorization layout).
    fn factor_assignment(n: u32, x: u64, y: u64, i: u64) -> Assignment {
        let mut sigma = Assignment::new();
        assign_bits(&mut sigma, |k| x_var(n, k), n, x);
        assign_bits(&mut sigma, |k| y_var(n, k), n, y);
        assign_bits(&mut sigma, |k| i_var(n, k), 2 * n, i);
        sigma
    }

    /// Every product bit agrees with integer multiplication for widths
    /// 1..=3, including the worked cases 1×1 (degenerate) and 5×3=15.
    #[test]
    fn multiplier_matches_integer_multiplication() {
        for n in 1..=3u32 {
            let mult = build_multiplier(n);
            let circuits = mult.product_bits();
            assert_eq!(circuits.len(), (2 * n) as usize);
            for x in 0..1u64 << n {
                for y in 0..1u64 << n {
                    let sigma = factor_assignment(n, x, y, 0);
                    for k in 1..=2 * n {
                        assert_eq!(
                            circuits[(k - 1) as usize].evaluate(&sigma),
                            bit(x * y, k),
                            "n={n} x={x} y={y} bit {k}"
                        );
                    }
                }
            }
        }
        // Degenerate width: bit 1 is x1 ∧ y1 and bit 2 is constant ⊥.
        let one = build_multiplier(1);
        assert_eq!(one.product_bit(2).as_constant(), Some(false));
        let low = one.product_bit(1);
        assert_eq!(low.as_constant(), None);
        assert!(low.evaluate(&factor_assignment(1, 1, 1, 0)));
        assert!(!low.evaluate(&factor_assignment(1, 1, 0, 0)));
        // Spot check from the width-3 table: 5 × 3 = 15.
        let three = build_multiplier(3);
        let sigma = factor_assignment(3, 5, 3, 0);
        let product: u64 = (1..=6)
            .map(|k| (three.product_bit(k).evaluate(&sigma) as u64) << (k - 1))
            .sum();
        assert_eq!(product, 15);
    }

    /// The shared DAG grows quadratically: a constant-size adder cell
    /// per bit pair.
    #[test]
    fn multiplier_size_is_quadratic() {
        let mut last = 0;
        for n in 1..=8u32 {
            let size = build_multiplier(n).shared_size();
            assert!(size > last, "size must grow with the width");
            assert!(
                size <= 60 * (n as usize).pow(2),
                "n={n}: shared size {size} exceeds the quadratic budget"
            );
            last = size;
        }
    }

    #[test]
    fn slice_bounds_are_validated() {
        assert!(matches!(
            build_rlj(2, 0, 1),
            Err(ArithError::SliceBounds { n: 2, l: 0, j: 1 })
        ));
        assert!(matches!(build_rlj(2, 3, 2), Err(ArithError::SliceBounds { .. })));
        assert!(matches!(build_rlj(2, 1, 5), Err(ArithError::SliceBounds { .. })));
        assert!(build_rlj(2, 1, 4).is_ok(), "wide slices are fine for the relation");
        assert!(matches!(
            skolem_for_rlj(2, 1, 4),
            Err(ArithError::SliceTooWide { n: 2, l: 1, j: 4 })
        ));
        let err = skolem_for_rlj(3, 1, 4).unwrap_err();
        assert_eq!(
            err.to_string(),
            "no closed-form Skolem vector for slices with j - l >= n (got n=3, l=1, j=4)"
        );
        assert_eq!(
            build_rlj(2, 0, 1).unwrap_err().to_string(),
            "slice bounds must satisfy 1 <= l <= j <= 2n (got n=2, l=0, j=1)"
        );
        assert_eq!(narrow_slices(2).len(), 7);
        assert!(narrow_slices(3).iter().all(|s| s.narrow() && s.width() <= 3));
    }

    /// The slice relation agrees with integer arithmetic for every
    /// bound pair (wide ones included) at widths 1 and 2, plus a spot
    /// check at width 3.
    #[test]
    fn rlj_circuit_matches_integer_semantics() {
        for n in 1..=2u32 {
            for l in 1..=2 * n {
                for j in l..=2 * n {
                    let spec = build_rlj(n, l, j).unwrap();
                    for x in 0..1u64 << n {
                        for y in 0..1u64 << n {
                            for i in 0..1u64 << (2 * n) {
                                let sigma = factor_assignment(n, x, y, i);
                                let expected =
                                    slice_value(x * y, l, j) == slice_value(i, l, j);
                                assert_eq!(
                                    spec.circuit().evaluate(&sigma),
                                    expected,
                                    "n={n} l={l} j={j} x={x} y={y} i={i}"
                                );
                            }
                        }
                    }
                }
            }
        }
        // Width 3, slice 2..=4: 5 × 3 = 15 carries 111 there.
        let spec = build_rlj(3, 2, 4).unwrap();
        assert!(spec.circuit().evaluate(&factor_assignment(3, 5, 3, 15)));
        assert!(!spec.circuit().evaluate(&factor_assignment(3, 5, 3, 7)));
        assert!(spec.circuit().evaluate(&factor_assignment(3, 2, 2, 4)));
    }

    /// The witnesses named by the shift construction satisfy the
    /// relation: X = 1 with Y copying the low input bits, and the
    /// single-bit slice matched by X = Y = 1 exactly on odd inputs.
    #[test]
    fn shift_witnesses_satisfy_the_slice_relations() {
        let spec = build_rlj(2, 1, 2).unwrap();
        for i in 0..16u64 {
            let sigma = factor_assignment(2, 1, slice_value(i, 1, 2), i);
            assert!(spec.circuit().evaluate(&sigma), "i={i}");
        }
        let spec = build_rlj(2, 1, 1).unwrap();
        for i in 0..16u64 {
            let sigma = factor_assignment(2, 1, 1, i);
            assert_eq!(spec.circuit().evaluate(&sigma), i % 2 == 1, "i={i}");
        }
    }

    /// The closed forms are constants and copies with the documented
    /// shapes, for one slice per case plus the degenerate width.
    #[test]
    fn closed_forms_use_constants_and_copies() {
        // Low case, n=2, slice 1..=2: X = 1, Y copies i1 i2.
        let psi = skolem_for_rlj(2, 1, 2).unwrap();
        for i in 0..16u64 {
            let mut sigma = Assignment::new();
            assign_bits(&mut sigma, |k| i_var(2, k), 4, i);
            assert_eq!(psi.evaluate(x_var(2, 1), &sigma), Some(true));
            assert_eq!(psi.evaluate(x_var(2, 2), &sigma), Some(false));
            assert_eq!(psi.evaluate(y_var(2, 1), &sigma), Some(bit(i, 1)));
            assert_eq!(psi.evaluate(y_var(2, 2), &sigma), Some(bit(i, 2)));
        }
        // High case, n=2, slice 3..=3: X = 2, y2 copies i3.
        let psi = skolem_for_rlj(2, 3, 3).unwrap();
        for i in 0..16u64 {
            let mut sigma = Assignment::new();
            assign_bits(&mut sigma, |k| i_var(2, k), 4, i);
            assert_eq!(psi.evaluate(x_var(2, 1), &sigma), Some(false));
            assert_eq!(psi.evaluate(x_var(2, 2), &sigma), Some(true));
            assert_eq!(psi.evaluate(y_var(2, 1), &sigma), Some(false));
            assert_eq!(psi.evaluate(y_var(2, 2), &sigma), Some(bit(i, 3)));
        }
        // Degenerate width: X = 1 and y1 = i1.
        let psi = skolem_for_rlj(1, 1, 1).unwrap();
        for i in 0..4u64 {
            let mut sigma = Assignment::new();
            assign_bits(&mut sigma, |k| i_var(1, k), 2, i);
            assert_eq!(psi.evaluate(x_var(1, 1), &sigma), Some(true));
            assert_eq!(psi.evaluate(y_var(1, 1), &sigma), Some(bit(i, 1)));
        }
    }

    /// Whenever any (X, Y) can satisfy a narrow slice, the closed-form
    /// vector's choice does — exhaustively over widths 1..=3 and every
    /// input word, with the top-corner slices (l > n, j = 2n) counted
    /// to make sure the special construction is exercised.
    #[test]
    fn closed_forms_verify_exhaustively() {
        let mut top_corner = 0;
        for n in 1..=3u32 {
            for slice in narrow_slices(n) {
                let (l, j) = (slice.l(), slice.j());
                if l > n && j == 2 * n {
                    top_corner += 1;
                }
                let psi = skolem_for_rlj(n, l, j).unwrap();
                assert!(
                    exhaustive_slice_check(n, l, j, &psi).unwrap(),
                    "n={n} l={l} j={j}: closed form missed a solvable word"
                );
            }
        }
        assert!(top_corner >= 4, "the top-corner slices must be exercised");

        // Regression for the corner: at width 2, slice 3..=4 with
        // (i3, i4) = (0, 1) is satisfied only by 3 × 3 = 9, which the
        // all-ones construction finds.
        let psi = skolem_for_rlj(2, 3, 4).unwrap();
        let mut sigma = Assignment::new();
        assign_bits(&mut sigma, |k| i_var(2, k), 4, 0b1000);
        assert_eq!(vector_value(&psi, &[x_var(2, 1), x_var(2, 2)], &sigma), 3);
        assert_eq!(vector_value(&psi, &[y_var(2, 1), y_var(2, 2)], &sigma), 3);
    }

    /// Solver-backed verification agrees: every narrow slice at widths
    /// 2 and 3, plus one width-4 slice per construction case.
    #[test]
    fn sat_verification_confirms_the_closed_forms() {
        let oracle = Oracle::internal();
        for n in 2..=3u32 {
            for slice in narrow_slices(n) {
                let (l, j) = (slice.l(), slice.j());
                let spec = build_rlj(n, l, j).unwrap();
                let psi = skolem_for_rlj(n, l, j).unwrap();
                assert!(verify_skolem(&spec, &psi, &oracle).unwrap(), "n={n} l={l} j={j}");
            }
        }
        for (l, j) in [(1, 4), (5, 8), (6, 8)] {
            let spec = build_rlj(4, l, j).unwrap();
            let psi = skolem_for_rlj(4, l, j).unwrap();
            assert!(verify_skolem(&spec, &psi, &oracle).unwrap(), "n=4 l={l} j={j}");
        }
    }

    /// The derived witnesses are genuine normal-form members within the
    /// size bound, and they support another round of synthesis.
    #[test]
    fn slice_witnesses_pass_membership() {
        let oracle = Oracle::internal();
        for slice in narrow_slices(2) {
            let (l, j) = (slice.l(), slice.j());
            let (witness, report) = saunf_for_rlj(2, l, j, &oracle).unwrap();
            assert_eq!(
                witness.verify(&oracle).unwrap(),
                SaunfVerdict::Pass,
                "l={l} j={j}"
            );
            assert!(report.within_bound(), "l={l} j={j}: {report:?}");
            let (psi, _) = sk_gen(&witness, &oracle).unwrap();
            assert!(verify_skolem(witness.spec(), &psi, &oracle).unwrap(), "l={l} j={j}");
        }
        let (witness, report) = saunf_for_rlj(3, 1, 3, &oracle).unwrap();
        assert_eq!(witness.verify(&oracle).unwrap(), SaunfVerdict::Pass);
        assert!(report.within_bound());
    }

    /// Witness sizes for the low word-sized slice stay quadratic in the
    /// width and grow monotonically.
    #[test]
    fn saunf_sizes_stay_quadratic() {
        let oracle = Oracle::internal();
        let mut last = 0;
        for n in 2..=6u32 {
            let (_, report) = saunf_for_rlj(n, 1, n, &oracle).unwrap();
            assert!(report.within_bound(), "n={n}: {report:?}");
            assert!(report.h > last, "n={n}: {report:?}");
            assert!(
                report.h <= 150 * (n as usize).pow(2),
                "n={n}: witness size {} exceeds the quadratic budget",
                report.h
            );
            last = report.h;
        }
    }

    /// The division recurrence on the worked instance: width 2, Y = 3,
    /// I = 9 gives x1 = 1, x2 = i2 ⊕ (X₍₁,₁₎ × Y₍₁,₂₎)₂ = 0 ⊕ 1 = 1,
    /// so X = 3 — and 3 × 3 = 9.
    #[test]
    fn odd_division_matches_the_worked_instance() {
        let psi = odd_division_skolem(2);
        let mut sigma = Assignment::new();
        assign_bits(&mut sigma, |k| y_var(2, k), 2, 3);
        assign_bits(&mut sigma, |k| i_var(2, k), 4, 9);
        assert_eq!(psi.evaluate(x_var(2, 1), &sigma), Some(true));
        assert_eq!(psi.evaluate(x_var(2, 2), &sigma), Some(true));
        assert_eq!(vector_value(&psi, &[x_var(2, 1), x_var(2, 2)], &sigma), 3);
        // Width 1: the single component is constant ⊤.
        let psi = odd_division_skolem(1);
        for y in 0..2u64 {
            for i in 0..4u64 {
                let mut sigma = Assignment::new();
                assign_bits(&mut sigma, |k| y_var(1, k), 1, y);
                assign_bits(&mut sigma, |k| i_var(1, k), 2, i);
                assert_eq!(psi.evaluate(x_var(1, 1), &sigma), Some(true));
            }
        }
    }

    /// For every input pair where some quotient exists (odd Y, I its
    /// exact multiple), the recurrence recovers that quotient — it is
    /// unique modulo 2ⁿ — and the relation accepts the choice.
    #[test]
    fn odd_division_recovers_every_quotient() {
        for n in 1..=3u32 {
            let psi = odd_division_skolem(n);
            let spec = odd_division_spec(n);
            let x_vars: Vec<VarId> = (1..=n).map(|k| x_var(n, k)).collect();
            for y in 0..1u64 << n {
                for i in 0..1u64 << (2 * n) {
                    let mut sigma = Assignment::new();
                    assign_bits(&mut sigma, |k| y_var(n, k), n, y);
                    assign_bits(&mut sigma, |k| i_var(n, k), 2 * n, i);
                    let solution = (0..1u64 << n)
                        .find(|&x| x * y == i && i % 2 == 1 && y % 2 == 1);
                    if let Some(x) = solution {
                        let got = vector_value(&psi, &x_vars, &sigma);
                        assert_eq!(got, x, "n={n} y={y} i={i}");
                        let mut full = sigma.clone();
                        assign_bits(&mut full, |k| x_var(n, k), n, got);
                        assert!(spec.circuit().evaluate(&full), "n={n} y={y} i={i}");
                    }
                }
            }
        }
    }

    /// The division relation itself: exact product match plus the
    /// parity guard on I and Y.
    #[test]
    fn division_relation_requires_odd_operands() {
        let spec = odd_division_spec(2);
        for x in 0..4u64 {
            for y in 0..4u64 {
                for i in 0..16u64 {
                    let sigma = factor_assignment(2, x, y, i);
                    let expected = x * y == i && i % 2 == 1 && y % 2 == 1;
                    assert_eq!(
                        spec.circuit().evaluate(&sigma),
                        expected,
                        "x={x} y={y} i={i}"
                    );
                }
            }
        }
    }

    /// Solver-backed verification of the division recurrence.
    #[test]
    fn sat_verification_confirms_the_division_recurrence() {
        let oracle = Oracle::internal();
        for n in 2..=3u32 {
            let spec = odd_division_spec(n);
            let psi = odd_division_skolem(n);
            assert!(verify_skolem(&spec, &psi, &oracle).unwrap(), "n={n}");
        }
    }

    /// The factorization relation accepts exactly the nontrivial
    /// factorizations.
    #[test]
    fn factorization_relation_excludes_trivial_factors() {
        let spec = factorization_spec(2);
        for x in 0..4u64 {
            for y in 0..4u64 {
                for i in 0..16u64 {
                    let sigma = factor_assignment(2, x, y, i);
                    let expected = x * y == i && x != 1 && y != 1;
                    assert_eq!(
                        spec.circuit().evaluate(&sigma),
                        expected,
                        "x={x} y={y} i={i}"
                    );
                }
            }
        }
        let satisfiable = |i: u64| {
            (0..4u64).any(|x| {
                (0..4u64)
                    .any(|y| spec.circuit().evaluate(&factor_assignment(2, x, y, i)))
            })
        };
        assert!(satisfiable(9), "9 = 3 x 3");
        assert!(satisfiable(4), "4 = 2 x 2");
        assert!(!satisfiable(3), "3 admits only the trivial 1 x 3");
        assert!(!satisfiable(2), "2 admits only the trivial 1 x 2");
    }
}
