//! Dialogue protocol: round trips, the final-state law, abort discipline,
//! decoy statistics and the reordering diagnostic.

mod common;

use proptest::prelude::*;
use rayon::prelude::*;

use common::{all_messages, scheme, scheme_at};
use qdialogue::dense_coding::check_useful;
use qdialogue::pauli::OperatorGroup;
use qdialogue::protocol::{
    leakage_posterior, run_dialogue, Actor, EveStrategy, ProtocolConfig, SequenceOrder,
};
use qdialogue::state::{named_state, qubit_eigenstate, Basis};

#[test]
fn honest_runs_decode_every_message_pair_and_obey_the_final_state_law() {
    for (state, group) in [("bell_phi_plus", "G1"), ("ghz", "G2^1(8)"), ("w4", "G2^8(8)"), ("q4", "G2^7(8)")] {
        let sc = scheme(state, group);
        let k = sc.message_bits();
        let table = sc.group().multiplication_table();
        let msgs = all_messages(k);
        for (i, bob) in msgs.iter().enumerate() {
            for (j, alice) in msgs.iter().enumerate() {
                let cfg = ProtocolConfig::new(sc.clone(), 1, (i * 97 + j) as u64);
                let (out, _) = run_dialogue(&cfg, bob, alice, EveStrategy::None).unwrap();
                assert!(!out.detected);
                assert_eq!(out.alice_decoded.as_deref(), Some(bob.as_str()));
                assert_eq!(out.bob_decoded.as_deref(), Some(alice.as_str()));
                let bi = sc.index_of_label(bob).unwrap();
                let aj = sc.index_of_label(alice).unwrap();
                assert_eq!(out.final_indices.unwrap(), vec![table[aj][bi]], "{state} {bob} {alice}");
            }
        }
    }
}

#[test]
fn multi_copy_runs_decode() {
    let sc = scheme("cluster4", "G2");
    let cfg = ProtocolConfig::new(sc, 5, 77);
    let bob = "00011011110010100111";
    let alice = "11100100001101011000";
    let (out, t) = run_dialogue(&cfg, bob, alice, EveStrategy::None).unwrap();
    assert_eq!(out.alice_decoded.as_deref(), Some(bob));
    assert_eq!(out.bob_decoded.as_deref(), Some(alice));
    assert_eq!(out.leg1.decoys, 10);
    assert_eq!(t.find("send").count(), 2);
}

#[test]
fn only_final_states_and_checks_are_announced() {
    let cfg = ProtocolConfig::new(scheme("ghz", "G2^1(8)"), 3, 5);
    let (_, t) = run_dialogue(&cfg, "010111001", "110000101", EveStrategy::None).unwrap();
    let public: Vec<&str> = t.events().iter().filter(|e| e.public).map(|e| e.event.as_str()).collect();
    for name in &public {
        assert!(
            [
                "rng",
                "send",
                "announce_decoy_positions",
                "announce_decoy_results",
                "error_rate",
                "continue",
                "announce_order",
                "announce_final_states",
            ]
            .contains(name),
            "{name}"
        );
    }
    assert!(t.events().iter().filter(|e| e.event == "encode").all(|e| !e.public));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aborted_runs_never_reach_alice(seed in any::<u64>(), copies in 1usize..12) {
        let sc = scheme("bell_phi_plus", "G1");
        let msg = "10".repeat(copies);
        let cfg = ProtocolConfig::new(sc, copies, seed);
        let (out, t) = run_dialogue(&cfg, &msg, &msg, EveStrategy::InterceptResend).unwrap();
        if out.leg1.detected {
            prop_assert!(out.detected && out.detected_on_leg == Some(1));
            prop_assert!(t.events().iter().all(|e| !(e.actor == Actor::Alice && e.event == "encode")));
            prop_assert!(t.find("announce_final_states").next().is_none());
        }
        prop_assert_eq!(out.detected, out.leg1.detected || out.leg2.as_ref().is_some_and(|c| c.detected));
    }

    #[test]
    fn seeded_runs_are_reproducible(seed in any::<u64>()) {
        let cfg = ProtocolConfig::new(scheme("ghz", "G2^1(8)"), 2, seed);
        let a = run_dialogue(&cfg, "011100", "101010", EveStrategy::InterceptResend).unwrap();
        let b = run_dialogue(&cfg, "011100", "101010", EveStrategy::InterceptResend).unwrap();
        prop_assert_eq!(a.1.to_json_lines(), b.1.to_json_lines());
    }

    #[test]
    fn swapping_roles_swaps_the_decodings(seed in any::<u64>(), b in 0usize..8, a in 0usize..8) {
        let sc = scheme("ghz", "G2^1(8)");
        let (bob, alice) = (sc.label_of(b), sc.label_of(a));
        let cfg = ProtocolConfig::new(sc, 1, seed);
        let (x, _) = run_dialogue(&cfg, &bob, &alice, EveStrategy::None).unwrap();
        let (y, _) = run_dialogue(&cfg, &alice, &bob, EveStrategy::None).unwrap();
        prop_assert_eq!(x.alice_decoded, y.bob_decoded);
        prop_assert_eq!(x.final_indices, y.final_indices);
    }
}

#[test]
fn decoys_look_like_travel_qubits() {
    // average decoy preparation
    let mut decoy = nalgebra::DMatrix::from_element(2, 2, num_complex::Complex64::new(0.0, 0.0));
    for b in [Basis::Z, Basis::X] {
        for bit in 0..2 {
            decoy += qubit_eigenstate(b, bit).partial_trace(&[1]).unwrap().entries() * num_complex::Complex64::new(0.25, 0.0);
        }
    }
    let sc = scheme("bell_phi_plus", "G1");
    for s in sc.basis() {
        let travel = s.partial_trace(&[2]).unwrap();
        let diff = (travel.entries() - &decoy).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }
}

#[test]
fn decoy_positions_are_uniform_over_slots() {
    let sc = scheme("bell_phi_plus", "G1");
    let copies = 4;
    let runs = 4000;
    let slots = 2 * copies;
    let mut hits = vec![0usize; slots];
    for seed in 0..runs {
        let cfg = ProtocolConfig::new(sc.clone(), copies, seed);
        let (_, t) = run_dialogue(&cfg, "00011011", "00000000", EveStrategy::None).unwrap();
        let ev = t.find("insert_decoys").next().unwrap();
        for p in ev.payload["positions"].as_array().unwrap() {
            hits[p.as_u64().unwrap() as usize] += 1;
        }
    }
    // each slot holds a decoy with probability 1/2
    let sigma = (0.25 / runs as f64).sqrt();
    for h in hits {
        assert!((h as f64 / runs as f64 - 0.5).abs() < 4.0 * sigma, "{h}");
    }
}

#[test]
fn intercept_resend_is_detected_at_the_expected_rate() {
    let sc = scheme("bell_phi_plus", "G1");
    let copies = 24;
    let runs = 400u64;
    let results: Vec<(usize, bool)> = (0..runs)
        .into_par_iter()
        .map(|seed| {
            let mut cfg = ProtocolConfig::new(sc.clone(), copies, seed);
            cfg.error_threshold = 0.0;
            let msg = "01".repeat(copies);
            let (out, _) = run_dialogue(&cfg, &msg, &msg, EveStrategy::InterceptResend).unwrap();
            (out.leg1.matched, out.leg1.detected)
        })
        .collect();
    let expected: Vec<f64> = results.iter().map(|(m, _)| 1.0 - 0.75f64.powi(*m as i32)).collect();
    let mean: f64 = expected.iter().sum::<f64>() / runs as f64;
    let var: f64 = expected.iter().map(|p| p * (1.0 - p)).sum::<f64>() / (runs * runs) as f64;
    let observed = results.iter().filter(|r| r.1).count() as f64 / runs as f64;
    assert!((observed - mean).abs() <= 3.0 * var.sqrt().max(1e-3), "{observed} vs {mean}");
}

/// W-state encoding whose travel pair in Z reveals part of Bob's element.
fn leaky_w_scheme() -> qdialogue::dense_coding::EncodingScheme {
    let g = OperatorGroup::parse_list(None, "II IY XI XY").unwrap();
    let w = named_state("w4").unwrap();
    check_useful("w4", &w, g.elements(), &[3, 4]).unwrap().scheme().unwrap()
}

fn mean_eve_accuracy(order: SequenceOrder) -> f64 {
    let sc = leaky_w_scheme();
    let copies = 8;
    let runs = 300u64;
    let total: f64 = (0..runs)
        .into_par_iter()
        .map(|seed| {
            let mut cfg = ProtocolConfig::new(sc.clone(), copies, seed);
            cfg.order = order;
            let msg = common::all_messages(2).join("").repeat(2);
            let (out, _) = run_dialogue(&cfg, &msg, &msg, EveStrategy::MeasureResend(Basis::Z)).unwrap();
            out.eve_symbol_accuracy.unwrap()
        })
        .sum();
    total / runs as f64
}

#[test]
fn reordering_hides_the_encoding_from_a_fixed_basis_eve() {
    let plain = mean_eve_accuracy(SequenceOrder::Plain);
    let shuffled = mean_eve_accuracy(SequenceOrder::Shuffled);
    assert!(plain > 0.45, "plain {plain}");
    assert!((shuffled - 0.25).abs() < 0.08, "shuffled {shuffled}");
}

#[test]
fn leakage_posterior_is_uniform_for_every_product() {
    for (state, group) in [("bell_phi_plus", "G1"), ("ghz", "G2^1(8)"), ("brown5", "G3^7(32)")] {
        let g = scheme(state, group).group().clone();
        for k in 0..g.order() {
            let pairs = leakage_posterior(&g, k).unwrap();
            assert_eq!(pairs.len(), g.order());
            assert!(pairs.iter().all(|p| (p.2 - 1.0 / g.order() as f64).abs() < 1e-15));
            assert!(pairs.iter().all(|&(i, j, _)| g.mul_index(j, i) == k));
        }
    }
}

#[test]
fn schemes_sending_every_qubit_are_rejected() {
    let g = OperatorGroup::parse_list(None, "II XI YI ZI").unwrap();
    let s = named_state("phi_plus").unwrap();
    let sc = check_useful("phi_plus", &s, g.elements(), &[1, 2]).unwrap().scheme().unwrap();
    assert!(run_dialogue(&ProtocolConfig::new(sc, 1, 0), "00", "00", EveStrategy::None).is_err());
    let _ = scheme_at("ghz", "G2^1(8)", &[2, 3]);
}
