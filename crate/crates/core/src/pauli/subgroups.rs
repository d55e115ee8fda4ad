use super::{named_group, OperatorGroup, PauliError, PauliString, GROUP_NAMES};

/// Number of `k`-dimensional subspaces of `F₂^d`.
pub fn gaussian_binomial(d: u32, k: u32) -> u128 {
    if k > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (d - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// Basis of the span of `vectors`, reduced so each basis vector owns a
/// distinct leading bit.
fn span_basis(vectors: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let lead = 63 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> lead & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// All `k`-row reduced echelon matrices over `F₂^d`, each row a bitmask.
fn rref_matrices(d: u32, k: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k as usize);
    choose_pivots(d, k, 0, &mut pivots, &mut out);
    out
}

fn choose_pivots(d: u32, k: u32, start: u32, pivots: &mut Vec<u32>, out: &mut Vec<Vec<u64>>) {
    if pivots.len() == k as usize {
        fill_free(d, pivots, out);
        return;
    }
    let remaining = k - pivots.len() as u32;
    for p in start..=d - remaining {
        pivots.push(p);
        choose_pivots(d, k, p + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free(d: u32, pivots: &[u32], out: &mut Vec<Vec<u64>>) {
    // row i may set any non-pivot column after its own pivot
    let free: Vec<Vec<u32>> = pivots
        .iter()
        .map(|&p| (p + 1..d).filter(|c| !pivots.contains(c)).collect())
        .collect();
    let total: u32 = free.iter().map(|f| f.len() as u32).sum();
    for assignment in 0u64..(1u64 << total) {
        let mut bit = 0;
        let rows = pivots
            .iter()
            .zip(&free)
            .map(|(&p, cols)| {
                let mut row = 1u64 << p;
                for &c in cols {
                    if assignment >> bit & 1 == 1 {
                        row |= 1u64 << c;
                    }
                    bit += 1;
                }
                row
            })
            .collect();
        out.push(rows);
    }
}

fn span(generators: &[u64]) -> Vec<u64> {
    (0u64..(1u64 << generators.len()))
        .map(|mask| {
            generators
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, g)| acc ^ g)
        })
        .collect()
}

/// Every subgroup of `ambient` with the given order. Elements of each
/// subgroup are listed by increasing code (lexicographic in `I<X<Y<Z`), and
/// the subgroups themselves are sorted by that element list.
pub fn enumerate_subgroups(
    ambient: &OperatorGroup,
    order: usize,
) -> Result<Vec<OperatorGroup>, PauliError> {
    if !order.is_power_of_two() {
        return Err(PauliError::OrderNotPowerOfTwo(order));
    }
    if !ambient.order().is_multiple_of(order) {
        return Err(PauliError::OrderDoesNotDivide {
            order,
            ambient: ambient.order(),
        });
    }
    let width = ambient.width();
    let basis = span_basis(ambient.elements().iter().map(PauliString::symplectic));
    let d = basis.len() as u32;
    let k = order.trailing_zeros();
    let mut groups: Vec<Vec<PauliString>> = rref_matrices(d, k)
        .into_iter()
        .map(|rows| {
            let generators: Vec<u64> = rows
                .iter()
                .map(|row| {
                    basis
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| row >> i & 1 == 1)
                        .fold(0, |acc, (_, b)| acc ^ b)
                })
                .collect();
            let mut elements: Vec<PauliString> = span(&generators)
                .into_iter()
                .map(|v| PauliString::from_symplectic(width, v))
                .collect::<Result<_, _>>()?;
            elements.sort();
            Ok(elements)
        })
        .collect::<Result<_, PauliError>>()?;
    groups.sort();
    groups
        .into_iter()
        .map(|elements| OperatorGroup::new(None, elements))
        .collect()
}

/// Catalog name of a group, or `G{width}#k({order})` where `k` is the
/// 1-based rank of the group among all subgroups of that order of the full
/// width-`width` group. Widths above 3 fall back to the element list.
pub fn subgroup_id(group: &OperatorGroup) -> String {
    for name in GROUP_NAMES {
        let named = named_group(name).expect("catalog names resolve");
        if named.width() == group.width() && named.same_elements(group) {
            return name.to_string();
        }
    }
    let width = group.width();
    if width > 3 {
        return group.label();
    }
    let full = full_group(width);
    let rank = enumerate_subgroups(&full, group.order())
        .ok()
        .and_then(|all| all.iter().position(|g| g.same_elements(group)))
        .map(|k| k + 1);
    match rank {
        Some(k) => format!("G{width}#{k}({})", group.order()),
        None => group.label(),
    }
}

fn full_group(width: usize) -> OperatorGroup {
    let elements = (0..1u64 << (2 * width))
        .map(|c| PauliString::from_code(width, c))
        .collect::<Result<Vec<_>, _>>()
        .expect("codes fit the width");
    OperatorGroup::new(None, elements).expect("full width group is closed")
}
