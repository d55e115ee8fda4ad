use super::{StateError, StateVector};

/// Every name accepted by [`named_state`].
pub const STATE_NAMES: [&str; 15] = [
    "bell_phi_plus",
    "phi_plus",
    "phi_minus",
    "psi_plus",
    "psi_minus",
    "ghz",
    "ghz_like",
    "ghz_like_bell",
    "w4",
    "cluster4",
    "cluster5",
    "omega4",
    "q4",
    "q5",
    "brown5",
];

fn kets(terms: &[(f64, &str)]) -> StateVector {
    StateVector::from_kets(terms).expect("catalog kets are well formed")
}

fn sum(terms: &[StateVector]) -> StateVector {
    let dim = terms[0].dim();
    let amps = (0..dim)
        .map(|i| terms.iter().map(|t| t.amps()[i]).sum())
        .collect();
    StateVector::normalized(amps).expect("catalog sums are nonzero")
}

fn with(prefix: &str, pair: &StateVector) -> StateVector {
    kets(&[(1.0, prefix)]).tensor(pair).expect("small tensor")
}

/// Catalog state by name. `bell_phi_plus` is the dialogue carrier
/// `(|01⟩+|10⟩)/√2`; `phi_*`/`psi_*` use the standard labels.
pub fn named_state(name: &str) -> Result<StateVector, StateError> {
    let state = match name {
        "bell_phi_plus" | "psi_plus" => kets(&[(1.0, "01"), (1.0, "10")]),
        "phi_plus" => kets(&[(1.0, "00"), (1.0, "11")]),
        "phi_minus" => kets(&[(1.0, "00"), (-1.0, "11")]),
        "psi_minus" => kets(&[(1.0, "01"), (-1.0, "10")]),
        "ghz" => kets(&[(1.0, "000"), (1.0, "111")]),
        "ghz_like" => kets(&[(1.0, "010"), (1.0, "100"), (1.0, "001"), (1.0, "111")]),
        "ghz_like_bell" => {
            let psi_plus = named_state("psi_plus")?;
            let psi_minus = named_state("psi_minus")?;
            let zero = kets(&[(1.0, "0")]);
            let one = kets(&[(1.0, "1")]);
            sum(&[
                psi_plus.tensor(&zero).expect("small tensor"),
                psi_minus.tensor(&one).expect("small tensor"),
            ])
        }
        "w4" => kets(&[(1.0, "0001"), (1.0, "0010"), (1.0, "0100"), (1.0, "1000")]),
        "cluster4" => kets(&[(1.0, "0000"), (1.0, "0011"), (1.0, "1100"), (-1.0, "1111")]),
        "cluster5" => kets(&[(1.0, "00000"), (1.0, "00111"), (1.0, "11101"), (1.0, "11010")]),
        "omega4" => kets(&[(1.0, "0000"), (1.0, "0110"), (1.0, "1001"), (-1.0, "1111")]),
        "q4" => kets(&[(1.0, "0000"), (1.0, "0101"), (1.0, "1000"), (1.0, "1110")]),
        "q5" => kets(&[(1.0, "0000"), (1.0, "1011"), (1.0, "1101"), (1.0, "1110")]),
        "brown5" => {
            // Bell pair on qubits 4,5 conditioned on the first three
            sum(&[
                with("001", &named_state("phi_minus")?),
                with("010", &named_state("psi_minus")?),
                with("100", &named_state("phi_plus")?),
                with("111", &named_state("psi_plus")?),
            ])
        }
        other => return Err(StateError::UnknownState(other.to_string())),
    };
    Ok(state)
}
