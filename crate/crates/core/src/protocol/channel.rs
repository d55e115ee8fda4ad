//! One transmission leg: decoy preparation, reordering, insertion, Eve,
//! decoy announcement, receiver measurement and the error-rate check.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::transcript::{Actor, Transcript};
use super::{EveStrategy, ProtocolError, SequenceOrder};
use crate::state::{qubit_eigenstate, Basis, StateVector};

/// Independent random streams, one per party plus one for measurement outcomes.
pub(crate) struct Streams {
    pub alice: ChaCha8Rng,
    pub bob: ChaCha8Rng,
    pub charlie: ChaCha8Rng,
    pub eve: ChaCha8Rng,
    pub nature: ChaCha8Rng,
}

pub(crate) const STREAM_IDS: [(&str, u64); 5] =
    [("alice", 1), ("bob", 2), ("charlie", 3), ("eve", 4), ("nature", 5)];

impl Streams {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        let stream = |id: u64| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(id);
            r
        };
        Self {
            alice: stream(1),
            bob: stream(2),
            charlie: stream(3),
            eve: stream(4),
            nature: stream(5),
        }
    }

    pub fn party(&mut self, actor: Actor) -> &mut ChaCha8Rng {
        match actor {
            Actor::Alice => &mut self.alice,
            Actor::Bob => &mut self.bob,
            Actor::Charlie => &mut self.charlie,
            Actor::Eve => &mut self.eve,
            Actor::System => &mut self.nature,
        }
    }
}

/// The `N` registers in play, with the travel qubits named by position.
pub(crate) struct Register {
    pub copies: Vec<StateVector>,
    pub travel: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub(crate) enum Slot {
    Travel { copy: usize, qubit: usize },
    Decoy { index: usize },
}

#[derive(Debug, Clone)]
struct Decoy {
    basis: Basis,
    bit: u8,
    state: StateVector,
}

/// Result of comparing decoys measured in the preparation basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoyCheck {
    pub leg: u8,
    pub decoys: usize,
    pub matched: usize,
    pub errors: usize,
    pub error_rate: f64,
    pub threshold: f64,
    /// `error_rate > threshold`.
    pub detected: bool,
}

/// `likelihood[i][o]`: probability that Eve, measuring the `m` travel
/// qubits of encoded state `i` in her basis, reads outcome string `o`.
pub(crate) type Likelihood = Vec<Vec<f64>>;

pub(crate) struct Leg {
    pub number: u8,
    pub sender: Actor,
    pub receiver: Actor,
    pub send_step: u8,
    pub check_step: u8,
}

pub(crate) struct LegReport {
    pub check: DecoyCheck,
    /// Eve's guess of the encoding of each copy, read from consecutive
    /// blocks of `m` slots.
    pub eve_guesses: Option<Vec<usize>>,
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Z => "Z",
        Basis::X => "X",
    }
}

fn random_basis(rng: &mut ChaCha8Rng) -> Basis {
    if rng.random_bool(0.5) {
        Basis::X
    } else {
        Basis::Z
    }
}

fn measure_slot(
    reg: &mut Register,
    decoys: &mut [Decoy],
    slot: Slot,
    basis: Basis,
    nature: &mut ChaCha8Rng,
) -> Result<u8, ProtocolError> {
    let target = match slot {
        Slot::Travel { copy, qubit } => (&mut reg.copies[copy], qubit),
        Slot::Decoy { index } => (&mut decoys[index].state, 1),
    };
    let (bit, after) = target.0.measure_qubit(target.1, basis, nature)?;
    *target.0 = after;
    Ok(bit)
}

/// Runs one leg and records it. Travel qubits return to canonical order
/// afterwards; only the bookkeeping moves, the qubits stay in their copies.
#[allow(clippy::too_many_arguments)]
pub(crate) fn transmit(
    reg: &mut Register,
    leg: &Leg,
    order: SequenceOrder,
    eve: EveStrategy,
    likelihood: Option<&Likelihood>,
    threshold: f64,
    streams: &mut Streams,
    transcript: &mut Transcript,
) -> Result<LegReport, ProtocolError> {
    let m = reg.travel.len();
    let travel_count = reg.copies.len() * m;

    let sender_rng = streams.party(leg.sender);
    let mut decoys: Vec<Decoy> = (0..travel_count)
        .map(|_| {
            let basis = random_basis(sender_rng);
            let bit = sender_rng.random_range(0..2u8);
            Decoy {
                basis,
                bit,
                state: qubit_eigenstate(basis, bit),
            }
        })
        .collect();
    transcript.private(
        leg.send_step,
        leg.sender,
        "prepare_decoys",
        json!({
            "leg": leg.number,
            "preps": decoys.iter().map(|d| format!("{}{}", basis_name(d.basis), d.bit)).collect::<Vec<_>>(),
        }),
    );

    let mut travel: Vec<Slot> = (0..reg.copies.len())
        .flat_map(|copy| reg.travel.iter().map(move |&qubit| Slot::Travel { copy, qubit }))
        .collect();
    if order == SequenceOrder::Shuffled {
        travel.shuffle(streams.party(leg.sender));
    }
    transcript.private(
        leg.send_step,
        leg.sender,
        "reorder",
        json!({ "leg": leg.number, "order": order, "sequence": travel }),
    );

    let total = 2 * travel_count;
    let mut decoy_positions: Vec<usize> = match order {
        SequenceOrder::Shuffled => {
            index::sample(streams.party(leg.sender), total, travel_count).into_vec()
        }
        SequenceOrder::Plain => (travel_count..total).collect(),
    };
    decoy_positions.sort_unstable();
    let mut sequence = Vec::with_capacity(total);
    let (mut t, mut d) = (0, 0);
    for pos in 0..total {
        if d < decoy_positions.len() && decoy_positions[d] == pos {
            sequence.push(Slot::Decoy { index: d });
            d += 1;
        } else {
            sequence.push(travel[t]);
            t += 1;
        }
    }
    transcript.private(
        leg.send_step,
        leg.sender,
        "insert_decoys",
        json!({ "leg": leg.number, "positions": decoy_positions }),
    );
    transcript.public(
        leg.send_step,
        leg.sender,
        "send",
        json!({ "leg": leg.number, "to": leg.receiver, "photons": total }),
    );

    let eve_guesses = match eve {
        EveStrategy::None => None,
        EveStrategy::InterceptResend => {
            let mut record = Vec::with_capacity(total);
            for &slot in &sequence {
                let basis = random_basis(&mut streams.eve);
                let bit = measure_slot(reg, &mut decoys, slot, basis, &mut streams.nature)?;
                record.push(format!("{}{}", basis_name(basis), bit));
            }
            transcript.private(
                leg.send_step,
                Actor::Eve,
                "intercept_resend",
                json!({ "leg": leg.number, "results": record }),
            );
            None
        }
        EveStrategy::MeasureResend(basis) => {
            let mut bits = Vec::with_capacity(total);
            for &slot in &sequence {
                bits.push(measure_slot(reg, &mut decoys, slot, basis, &mut streams.nature)?);
            }
            let guesses = likelihood.map(|table| {
                bits.chunks(m)
                    .take(reg.copies.len())
                    .map(|block| {
                        let o = block.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
                        map_guess(table, o)
                    })
                    .collect::<Vec<_>>()
            });
            transcript.private(
                leg.send_step,
                Actor::Eve,
                "measure_resend",
                json!({ "leg": leg.number, "basis": basis, "results": bits, "guesses": guesses }),
            );
            guesses
        }
    };

    transcript.public(
        leg.check_step,
        leg.sender,
        "announce_decoy_positions",
        json!({ "leg": leg.number, "positions": decoy_positions }),
    );
    let mut bases = Vec::with_capacity(travel_count);
    let mut results = Vec::with_capacity(travel_count);
    for (k, _) in decoy_positions.iter().enumerate() {
        let basis = random_basis(streams.party(leg.receiver));
        let bit = measure_slot(reg, &mut decoys, Slot::Decoy { index: k }, basis, &mut streams.nature)?;
        bases.push(basis);
        results.push(bit);
    }
    transcript.public(
        leg.check_step,
        leg.receiver,
        "announce_decoy_results",
        json!({
            "leg": leg.number,
            "results": bases.iter().zip(&results).map(|(b, r)| format!("{}{}", basis_name(*b), r)).collect::<Vec<_>>(),
        }),
    );
    let mut matched = 0;
    let mut errors = 0;
    for (k, decoy) in decoys.iter().enumerate() {
        if bases[k] == decoy.basis {
            matched += 1;
            if results[k] != decoy.bit {
                errors += 1;
            }
        }
    }
    let error_rate = if matched == 0 {
        0.0
    } else {
        errors as f64 / matched as f64
    };
    let check = DecoyCheck {
        leg: leg.number,
        decoys: travel_count,
        matched,
        errors,
        error_rate,
        threshold,
        detected: error_rate > threshold,
    };
    transcript.public(leg.check_step, leg.sender, "error_rate", serde_json::to_value(&check).expect("check serializes"));
    transcript.public(
        leg.check_step,
        leg.sender,
        if check.detected { "abort" } else { "continue" },
        json!({ "leg": leg.number }),
    );
    Ok(LegReport { check, eve_guesses })
}

fn map_guess(table: &Likelihood, outcome: usize) -> usize {
    let mut best = 0;
    for (i, row) in table.iter().enumerate() {
        if row[outcome] > table[best][outcome] + 1e-12 {
            best = i;
        }
    }
    best
}

/// Outcome distribution of each encoded state's travel qubits measured
/// qubit-by-qubit in `basis`.
pub(crate) fn travel_likelihood(basis_states: &[StateVector], travel: &[usize], basis: Basis) -> Likelihood {
    let m = travel.len();
    let dim = 1usize << m;
    basis_states
        .iter()
        .map(|s| {
            let rho = s.partial_trace(travel).expect("travel positions are valid");
            (0..dim)
                .map(|o| match basis {
                    Basis::Z => rho.get(o, o).re,
                    Basis::X => {
                        // ⟨o|H^{⊗m} ρ H^{⊗m}|o⟩
                        let sign = |x: usize| if (o & x).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                        let mut p = 0.0;
                        for x in 0..dim {
                            for y in 0..dim {
                                p += sign(x) * sign(y) * rho.get(x, y).re;
                            }
                        }
                        p / dim as f64
                    }
                })
                .collect()
        })
        .collect()
}
