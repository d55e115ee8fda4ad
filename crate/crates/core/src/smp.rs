//! Private equality test mediated by a semi-honest third party. Charlie
//! sends `|φᵢ⟩` round Alice and Bob, each applies the element named by
//! their value, and Charlie sees `|φᵢ⟩` again exactly when the values agree,
//! since every element is its own inverse.

use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::dense_coding::EncodingScheme;
use crate::pauli::OperatorGroup;
use crate::protocol::{
    rng_event, transmit, Actor, DecoyCheck, EveStrategy, Leg, ProtocolError, Register,
    SequenceOrder, Streams, Transcript, DEFAULT_THRESHOLD,
};

#[derive(Debug, Clone)]
pub struct SmpConfig {
    pub scheme: EncodingScheme,
    /// Charlie's starting basis index; drawn uniformly when absent.
    pub initial_index: Option<usize>,
    pub seed: u64,
    pub error_threshold: f64,
    pub order: SequenceOrder,
}

impl SmpConfig {
    pub fn new(scheme: EncodingScheme, seed: u64) -> Self {
        Self {
            scheme,
            initial_index: None,
            seed,
            error_threshold: DEFAULT_THRESHOLD,
            order: SequenceOrder::Shuffled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmpOutcome {
    /// `final_index == Some(initial_index)`.
    pub equal: bool,
    pub initial_index: usize,
    pub final_index: Option<usize>,
    /// Input pairs consistent with what Charlie saw.
    pub charlie_posterior: usize,
    pub detected: bool,
    pub legs: Vec<DecoyCheck>,
}

/// `(a, b)` pairs that take `initial` to `final` under `g_b·g_a`.
pub fn consistent_pairs(group: &OperatorGroup, final_index: usize, initial_index: usize) -> Vec<(usize, usize)> {
    let order = group.order();
    (0..order)
        .flat_map(|a| (0..order).map(move |b| (a, b)))
        .filter(|&(a, b)| group.mul_index(b, group.mul_index(a, initial_index)) == final_index)
        .collect()
}

/// Number of input pairs Charlie cannot tell apart after the run.
pub fn charlie_knowledge(
    scheme: &EncodingScheme,
    final_index: usize,
    initial_index: usize,
) -> Result<usize, ProtocolError> {
    let order = scheme.group().order();
    for index in [final_index, initial_index] {
        if index >= order {
            return Err(ProtocolError::BadIndex { index, order });
        }
    }
    Ok(consistent_pairs(scheme.group(), final_index, initial_index).len())
}

pub fn run_smp(
    cfg: &SmpConfig,
    a_value: &str,
    b_value: &str,
    eve: EveStrategy,
) -> Result<(SmpOutcome, Transcript), ProtocolError> {
    if !(0.0..=1.0).contains(&cfg.error_threshold) {
        return Err(ProtocolError::BadThreshold(cfg.error_threshold));
    }
    let scheme = &cfg.scheme;
    let group = scheme.group();
    let a = crate::protocol::split_message(scheme, a_value, 1)?[0];
    let b = crate::protocol::split_message(scheme, b_value, 1)?[0];
    let mut streams = Streams::new(cfg.seed);
    let mut transcript = Transcript::new();
    rng_event(&mut transcript, cfg.seed);

    let initial = match cfg.initial_index {
        Some(i) if i >= group.order() => {
            return Err(ProtocolError::BadIndex { index: i, order: group.order() })
        }
        Some(i) => i,
        None => streams.charlie.random_range(0..group.order()),
    };
    let positions = scheme.positions().to_vec();
    transcript.private(
        1,
        Actor::Charlie,
        "prepare",
        json!({ "state": scheme.state_label(), "initial_index": initial, "travel": positions }),
    );
    let mut reg = Register {
        copies: vec![scheme.basis()[initial].clone()],
        travel: positions.clone(),
    };

    let hops = [
        (Actor::Charlie, Actor::Alice, None),
        (Actor::Alice, Actor::Bob, Some(a)),
        (Actor::Bob, Actor::Charlie, Some(b)),
    ];
    let mut legs = Vec::new();
    for (k, &(sender, receiver, encoding)) in hops.iter().enumerate() {
        let send_step = 2 + 2 * k as u8;
        if let Some(index) = encoding {
            reg.copies[0] = reg.copies[0].apply(&group.element(index), &positions)?;
            transcript.private(send_step, sender, "encode", json!({ "index": index }));
        }
        let report = transmit(
            &mut reg,
            &Leg { number: k as u8 + 1, sender, receiver, send_step, check_step: send_step + 1 },
            cfg.order,
            eve,
            None,
            cfg.error_threshold,
            &mut streams,
            &mut transcript,
        )?;
        let detected = report.check.detected;
        legs.push(report.check);
        if detected {
            return Ok((
                SmpOutcome {
                    equal: false,
                    initial_index: initial,
                    final_index: None,
                    charlie_posterior: group.order() * group.order(),
                    detected: true,
                    legs,
                },
                transcript,
            ));
        }
        transcript.public(send_step + 1, sender, "announce_order", json!({ "leg": k + 1 }));
    }

    let final_index = reg.copies[0].measure_in_basis(&scheme.measurement_basis(), &mut streams.nature)?;
    let equal = final_index == initial;
    transcript.private(8, Actor::Charlie, "measure", json!({ "final_index": final_index }));
    transcript.public(8, Actor::Charlie, "announce_equality", json!({ "equal": equal }));
    let charlie_posterior = if final_index < group.order() {
        consistent_pairs(group, final_index, initial).len()
    } else {
        0
    };
    Ok((
        SmpOutcome {
            equal,
            initial_index: initial,
            final_index: Some(final_index),
            charlie_posterior,
            detected: false,
            legs,
        },
        transcript,
    ))
}
