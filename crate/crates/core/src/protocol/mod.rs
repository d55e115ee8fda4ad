//! Two-way quantum dialogue over a useful encoding scheme, with decoy
//! checks on both legs and simulated eavesdroppers.

mod channel;
mod transcript;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dense_coding::EncodingScheme;
use crate::pauli::OperatorGroup;
use crate::state::{Basis, StateError};

pub use channel::DecoyCheck;
pub(crate) use channel::{transmit, travel_likelihood, Leg, Register, Streams, STREAM_IDS};
pub use transcript::{Actor, Event, Transcript};

pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("message must be {expected} bits of 0/1, got {got:?}")]
    BadMessage { expected: usize, got: String },
    #[error("copies must be at least 1")]
    NoCopies,
    #[error("threshold {0} is outside [0, 1]")]
    BadThreshold(f64),
    #[error("scheme sends every qubit (m = n = {0}); dialogue needs home qubits")]
    NoHomeQubits(usize),
    #[error("index {index} is outside a group of order {order}")]
    BadIndex { index: usize, order: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "basis", rename_all = "snake_case")]
pub enum EveStrategy {
    None,
    /// Measure every photon in a random Z/X basis and resend the eigenstate.
    InterceptResend,
    /// Measure every photon in one fixed basis, resend, and guess Bob's
    /// encodings from consecutive blocks of `m` photons.
    MeasureResend(Basis),
}

/// How travel photons are laid out in a transmitted sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceOrder {
    /// Secret permutation and random decoy positions.
    #[default]
    Shuffled,
    /// Diagnostic only: travel photons in copy order, decoys appended.
    Plain,
}

#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub scheme: EncodingScheme,
    pub copies: usize,
    pub error_threshold: f64,
    pub seed: u64,
    pub order: SequenceOrder,
}

impl ProtocolConfig {
    pub fn new(scheme: EncodingScheme, copies: usize, seed: u64) -> Self {
        Self {
            scheme,
            copies,
            error_threshold: DEFAULT_THRESHOLD,
            seed,
            order: SequenceOrder::Shuffled,
        }
    }

    fn validate(&self) -> Result<(), ProtocolError> {
        if self.copies == 0 {
            return Err(ProtocolError::NoCopies);
        }
        if !(0.0..=1.0).contains(&self.error_threshold) {
            return Err(ProtocolError::BadThreshold(self.error_threshold));
        }
        let n = self.scheme.state().n();
        if self.scheme.positions().len() == n {
            return Err(ProtocolError::NoHomeQubits(n));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub detected: bool,
    /// Leg on which the run aborted.
    pub detected_on_leg: Option<u8>,
    pub leg1: DecoyCheck,
    pub leg2: Option<DecoyCheck>,
    /// Bob's message as read by Alice; `?` marks an undecodable symbol.
    pub alice_decoded: Option<String>,
    /// Alice's message as read by Bob.
    pub bob_decoded: Option<String>,
    /// Basis index Bob measured on each copy.
    pub final_indices: Option<Vec<usize>>,
    /// Eve named every one of Bob's encodings correctly.
    pub eve_guess_correct: Option<bool>,
    pub eve_symbol_accuracy: Option<f64>,
}

impl Outcome {
    pub fn error_rate_leg1(&self) -> f64 {
        self.leg1.error_rate
    }

    pub fn error_rate_leg2(&self) -> Option<f64> {
        self.leg2.as_ref().map(|c| c.error_rate)
    }
}

pub(crate) fn split_message(
    scheme: &EncodingScheme,
    bits: &str,
    copies: usize,
) -> Result<Vec<usize>, ProtocolError> {
    let k = scheme.message_bits();
    let bad = || ProtocolError::BadMessage {
        expected: k * copies,
        got: bits.to_string(),
    };
    if bits.len() != k * copies || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(bad());
    }
    if k == 0 {
        return Ok(vec![0; copies]);
    }
    (0..copies)
        .map(|j| scheme.index_of_label(&bits[j * k..(j + 1) * k]).ok_or_else(bad))
        .collect()
}

fn join_labels(scheme: &EncodingScheme, symbols: &[Option<usize>]) -> String {
    symbols
        .iter()
        .map(|s| match s {
            Some(i) => scheme.label_of(*i),
            None => "?".repeat(scheme.message_bits()),
        })
        .collect()
}

/// The index `x` with `gₓ · g_known = g_product`.
fn solve_factor(group: &OperatorGroup, product: usize, known: usize) -> Option<usize> {
    (product < group.order()).then(|| group.mul_index(product, known))
}

pub(crate) fn rng_event(transcript: &mut Transcript, seed: u64) {
    let streams: serde_json::Map<String, serde_json::Value> = STREAM_IDS
        .iter()
        .map(|(name, id)| (name.to_string(), json!(id)))
        .collect();
    transcript.public(0, Actor::System, "rng", json!({ "algorithm": "chacha8", "seed": seed, "streams": streams }));
}

/// Runs the dialogue once. Returns the outcome and the full transcript.
pub fn run_dialogue(
    cfg: &ProtocolConfig,
    bob_msg: &str,
    alice_msg: &str,
    eve: EveStrategy,
) -> Result<(Outcome, Transcript), ProtocolError> {
    cfg.validate()?;
    let scheme = &cfg.scheme;
    let group = scheme.group();
    let bob_symbols = split_message(scheme, bob_msg, cfg.copies)?;
    let alice_symbols = split_message(scheme, alice_msg, cfg.copies)?;
    let mut streams = Streams::new(cfg.seed);
    let mut transcript = Transcript::new();
    rng_event(&mut transcript, cfg.seed);

    // step 1: prepare and encode
    transcript.private(
        1,
        Actor::Bob,
        "prepare",
        json!({ "state": scheme.state_label(), "copies": cfg.copies }),
    );
    let positions = scheme.positions().to_vec();
    let copies = bob_symbols
        .iter()
        .map(|&b| scheme.state().apply(&group.element(b), &positions))
        .collect::<Result<Vec<_>, _>>()?;
    transcript.private(1, Actor::Bob, "encode", json!({ "indices": bob_symbols }));
    let n = scheme.state().n();
    let home: Vec<usize> = (1..=n).filter(|q| !positions.contains(q)).collect();
    transcript.private(2, Actor::Bob, "split", json!({ "travel": positions, "home": home }));

    let mut reg = Register {
        copies,
        travel: positions.clone(),
    };
    let likelihood = match eve {
        EveStrategy::MeasureResend(b) => Some(travel_likelihood(scheme.basis(), &positions, b)),
        _ => None,
    };

    // steps 2-3: Bob → Alice
    let leg1 = transmit(
        &mut reg,
        &Leg { number: 1, sender: Actor::Bob, receiver: Actor::Alice, send_step: 2, check_step: 3 },
        cfg.order,
        eve,
        likelihood.as_ref(),
        cfg.error_threshold,
        &mut streams,
        &mut transcript,
    )?;
    let (eve_guess_correct, eve_symbol_accuracy) = match &leg1.eve_guesses {
        Some(g) => {
            let right = g.iter().zip(&bob_symbols).filter(|(a, b)| a == b).count();
            (Some(right == g.len()), Some(right as f64 / g.len() as f64))
        }
        None => (None, None),
    };
    if leg1.check.detected {
        return Ok((
            Outcome {
                detected: true,
                detected_on_leg: Some(1),
                leg1: leg1.check,
                leg2: None,
                alice_decoded: None,
                bob_decoded: None,
                final_indices: None,
                eve_guess_correct,
                eve_symbol_accuracy,
            },
            transcript,
        ));
    }
    transcript.public(4, Actor::Bob, "announce_order", json!({ "leg": 1 }));

    // step 5: Alice restores the order, encodes, and sends back
    transcript.private(5, Actor::Alice, "restore_order", json!({ "leg": 1 }));
    for (copy, &a) in reg.copies.iter_mut().zip(&alice_symbols) {
        *copy = copy.apply(&group.element(a), &positions)?;
    }
    transcript.private(5, Actor::Alice, "encode", json!({ "indices": alice_symbols }));
    let leg2 = transmit(
        &mut reg,
        &Leg { number: 2, sender: Actor::Alice, receiver: Actor::Bob, send_step: 5, check_step: 6 },
        cfg.order,
        eve,
        None,
        cfg.error_threshold,
        &mut streams,
        &mut transcript,
    )?;
    if leg2.check.detected {
        return Ok((
            Outcome {
                detected: true,
                detected_on_leg: Some(2),
                leg1: leg1.check,
                leg2: Some(leg2.check),
                alice_decoded: None,
                bob_decoded: None,
                final_indices: None,
                eve_guess_correct,
                eve_symbol_accuracy,
            },
            transcript,
        ));
    }
    transcript.public(7, Actor::Alice, "announce_order", json!({ "leg": 2 }));

    // step 8: Bob measures each register in the scheme basis
    transcript.private(8, Actor::Bob, "restore_order", json!({ "leg": 2 }));
    let basis = scheme.measurement_basis();
    let finals = reg
        .copies
        .iter()
        .map(|c| c.measure_in_basis(&basis, &mut streams.nature))
        .collect::<Result<Vec<_>, _>>()?;
    transcript.public(8, Actor::Bob, "announce_final_states", json!({ "indices": finals }));
    let bob_reads: Vec<Option<usize>> = finals
        .iter()
        .zip(&bob_symbols)
        .map(|(&f, &b)| solve_factor(group, f, b))
        .collect();
    transcript.private(8, Actor::Bob, "decode", json!({ "indices": bob_reads }));

    // step 9: Alice decodes Bob's message from the announced final states
    let alice_reads: Vec<Option<usize>> = finals
        .iter()
        .zip(&alice_symbols)
        .map(|(&f, &a)| solve_factor(group, f, a))
        .collect();
    transcript.private(9, Actor::Alice, "decode", json!({ "indices": alice_reads }));

    Ok((
        Outcome {
            detected: false,
            detected_on_leg: None,
            leg1: leg1.check,
            leg2: Some(leg2.check),
            alice_decoded: Some(join_labels(scheme, &alice_reads)),
            bob_decoded: Some(join_labels(scheme, &bob_reads)),
            final_indices: Some(finals),
            eve_guess_correct,
            eve_symbol_accuracy,
        },
        transcript,
    ))
}

/// Pairs `(i, j)` with `gⱼ · gᵢ = g_k`, each with posterior `1/|G|`.
pub fn leakage_posterior(
    group: &OperatorGroup,
    k_index: usize,
) -> Result<Vec<(usize, usize, f64)>, ProtocolError> {
    let order = group.order();
    if k_index >= order {
        return Err(ProtocolError::BadIndex { index: k_index, order });
    }
    let pairs: Vec<(usize, usize)> = (0..order)
        .flat_map(|i| (0..order).map(move |j| (i, j)))
        .filter(|&(i, j)| group.mul_index(j, i) == k_index)
        .collect();
    let weight = 1.0 / pairs.len() as f64;
    Ok(pairs.into_iter().map(|(i, j)| (i, j, weight)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EveGuess {
    pub trials: usize,
    pub successes: usize,
    pub empirical: f64,
    pub analytic: f64,
    /// Binomial standard deviation of `empirical` under `analytic`.
    pub sigma: f64,
}

/// Eve knows only the product `g_A·g_B` and picks one consistent
/// decomposition uniformly; success means she named Alice's element.
pub fn eve_guess_success(
    scheme: &EncodingScheme,
    trials: usize,
    seed: u64,
) -> Result<EveGuess, ProtocolError> {
    if trials == 0 {
        return Err(ProtocolError::NoTrials);
    }
    let group = scheme.group();
    let order = group.order();
    let mut streams = Streams::new(seed);
    let mut successes = 0;
    for _ in 0..trials {
        let a = streams.alice.random_range(0..order);
        let b = streams.bob.random_range(0..order);
        let k = group.mul_index(a, b);
        let consistent = leakage_posterior(group, k)?;
        let &(_, guess_a, _) = consistent.choose(&mut streams.eve).expect("nonempty");
        if guess_a == a {
            successes += 1;
        }
    }
    let analytic = 1.0 / order as f64;
    Ok(EveGuess {
        trials,
        successes,
        empirical: successes as f64 / trials as f64,
        analytic,
        sigma: (analytic * (1.0 - analytic) / trials as f64).sqrt(),
    })
}
