mod common;

use common::{bits_of, tb_codebook_ranking, tb_encode};
use listfec::adaptive::{adaptive_search, ListDecoder};
use listfec::crc::CrcSpec;
use listfec::list_viterbi::{lva_decode, TbccListDecoder};
use listfec::tb_search::tb_list_decode;
use listfec::tbcc::{ConvCodeSpec, Trellis};
use listfec::BitBlock;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn toy_codes() -> Vec<ConvCodeSpec> {
    vec![
        ConvCodeSpec::from_octal(&["7", "5"], 2).unwrap(),
        ConvCodeSpec::from_octal(&["15", "17"], 3).unwrap(),
        ConvCodeSpec::from_octal(&["13", "15", "17"], 3).unwrap(),
    ]
}

fn random_llrs(rng: &mut ChaCha8Rng, len: usize, integer: bool) -> Vec<f64> {
    (0..len)
        .map(|_| {
            if integer {
                rng.random_range(-3..=3) as f64
            } else {
                rng.random_range(-4.0..4.0)
            }
        })
        .collect()
}

#[test]
fn full_list_equals_exhaustive_codebook_ranking() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for spec in toy_codes() {
        let t = Trellis::build(&spec);
        for k in spec.memory()..=10 {
            for trial in 0..6 {
                // Integer LLRs force many exact ties.
                let llrs = random_llrs(&mut rng, k * spec.outputs(), trial % 2 == 0);
                let got = lva_decode(&llrs, &t, 1 << k).unwrap();
                let want = tb_codebook_ranking(spec.generators(), spec.memory(), k, &llrs);
                assert_eq!(got.len(), want.len(), "{spec:?} k={k}");
                for (g, w) in got.iter().zip(&want) {
                    assert_eq!(
                        (g.message, g.metric.to_bits(), g.start_state),
                        (w.0, w.1.to_bits(), w.2)
                    );
                }
            }
        }
    }
}

#[test]
fn toy_k6_list_matches_enumeration_prefix() {
    let spec = ConvCodeSpec::from_octal(&["7", "5"], 2).unwrap();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..50 {
        let llrs = random_llrs(&mut rng, 12, false);
        let want = tb_codebook_ranking(spec.generators(), 2, 6, &llrs);
        let got = lva_decode(&llrs, &t, 64).unwrap();
        let msgs: Vec<u64> = got.iter().map(|c| c.message).collect();
        let oracle: Vec<u64> = want.iter().map(|w| w.0).take(msgs.len()).collect();
        assert_eq!(msgs, oracle);
    }
}

#[test]
fn larger_lists_contain_smaller_ones() {
    let spec = ConvCodeSpec::rate_fifth();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..10 {
        let llrs = random_llrs(&mut rng, 5 * 43, false);
        let mut prev: Vec<u64> = Vec::new();
        for l in [1, 2, 4, 8, 16, 32, 64] {
            let cur: Vec<u64> = lva_decode(&llrs, &t, l)
                .unwrap()
                .iter()
                .map(|c| c.message)
                .collect();
            assert!(
                prev.iter().all(|m| cur.contains(m)),
                "L={l} lost a candidate of L={}",
                l / 2
            );
            assert!(cur.len() >= prev.len());
            prev = cur;
        }
    }
}

#[test]
fn every_candidate_is_tail_biting_and_reencodes_to_its_metric() {
    let spec = ConvCodeSpec::from_octal(&["15", "17"], 3).unwrap();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let llrs = random_llrs(&mut rng, 2 * 12, false);
    for c in lva_decode(&llrs, &t, 16).unwrap() {
        assert_eq!(c.start_state, c.end_state);
        let cw = tb_encode(spec.generators(), 3, &bits_of(c.message, 12));
        let m = common::staged_correlation(&cw, &llrs, 2);
        assert_eq!(m.to_bits(), c.metric.to_bits());
    }
}

#[test]
fn positive_scaling_keeps_the_ranking() {
    let spec = ConvCodeSpec::rate_fifth();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..5 {
        let llrs = random_llrs(&mut rng, 5 * 43, false);
        let scaled: Vec<f64> = llrs.iter().map(|x| x * 0.125).collect();
        let a: Vec<u64> = lva_decode(&llrs, &t, 16)
            .unwrap()
            .iter()
            .map(|c| c.message)
            .collect();
        let b: Vec<u64> = lva_decode(&scaled, &t, 16)
            .unwrap()
            .iter()
            .map(|c| c.message)
            .collect();
        assert_eq!(a, b);
        let irrational: Vec<f64> = llrs.iter().map(|x| x * std::f64::consts::E).collect();
        let c: Vec<u64> = lva_decode(&irrational, &t, 16)
            .unwrap()
            .iter()
            .map(|c| c.message)
            .collect();
        assert_eq!(a, c);
    }
}

#[test]
fn adaptive_answer_persists_at_larger_lists() {
    let spec = ConvCodeSpec::rate_fifth();
    let crc = CrcSpec::by_name("tbcc-dso-11").unwrap();
    let dec = TbccListDecoder::new(&spec, 43).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut checked = 0;
    for _ in 0..200 {
        let msg = BitBlock::random(&mut rng, 32);
        let cw = spec.encode(&crc.encode(&msg)).unwrap();
        let llrs: Vec<f64> = cw
            .iter()
            .map(|b| (if b == 0 { 1.0 } else { -1.0 }) * 1.2 + rng.random_range(-2.2..2.2))
            .collect();
        let hit = adaptive_search(&llrs, &dec, &crc, 64).unwrap();
        let Some(found) = hit.candidate else { continue };
        checked += 1;
        let mut l = hit.list_size_used;
        while l <= 64 {
            let best = dec
                .decode_list(&llrs, l)
                .unwrap()
                .into_iter()
                .find(|c| crc.check_word(c.word, 43))
                .expect("a passing candidate survives");
            assert!(best.score >= found.score);
            l *= 2;
        }
    }
    assert!(checked > 100);
}

#[test]
fn certified_candidates_are_the_exhaustive_ranking_prefix() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for spec in toy_codes() {
        let t = Trellis::build(&spec);
        for k in [6, 8, 10] {
            for trial in 0..20 {
                let integer = trial % 2 == 0;
                let llrs = random_llrs(&mut rng, k * spec.outputs(), integer);
                let want = tb_codebook_ranking(spec.generators(), spec.memory(), k, &llrs);
                for l in [1, 2, 4, 8, 32] {
                    let got = lva_decode(&llrs, &t, l).unwrap();
                    let cert = got.iter().take_while(|c| c.certified).count();
                    assert!(got[cert..].iter().all(|c| !c.certified));
                    for (g, w) in got[..cert].iter().zip(&want) {
                        // Ties at equal metric may order words differently.
                        assert_eq!(g.metric.to_bits(), w.1.to_bits(), "{spec:?} k={k} L={l}");
                        if !integer {
                            assert_eq!(g.message, w.0);
                        }
                    }
                    if l >= 1 << k {
                        assert_eq!(cert, got.len());
                    }
                }
            }
        }
    }
}

#[test]
fn certification_grows_with_the_list() {
    let spec = ConvCodeSpec::rate_fifth();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..10 {
        let llrs = random_llrs(&mut rng, 5 * 43, false);
        let mut prev: Vec<u64> = Vec::new();
        for l in [1, 2, 4, 8, 16, 32, 64] {
            let cur: Vec<u64> = lva_decode(&llrs, &t, l)
                .unwrap()
                .into_iter()
                .take_while(|c| c.certified)
                .map(|c| c.message)
                .collect();
            assert!(cur.len() >= prev.len());
            assert_eq!(&cur[..prev.len()], prev.as_slice());
            prev = cur;
        }
    }
}

#[test]
fn best_first_search_equals_exhaustive_ranking() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for spec in toy_codes() {
        let t = Trellis::build(&spec);
        for k in [spec.memory(), 5, 8, 10] {
            for trial in 0..12 {
                let llrs = random_llrs(&mut rng, k * spec.outputs(), trial % 2 == 0);
                let want = tb_codebook_ranking(spec.generators(), spec.memory(), k, &llrs);
                for l in [1, 2, 3, 8, 40, 1 << k, (1 << k) + 5] {
                    let got = tb_list_decode(&llrs, &t, l).unwrap();
                    assert_eq!(got.len(), l.min(want.len()), "{spec:?} k={k} L={l}");
                    for (g, w) in got.iter().zip(&want) {
                        assert_eq!(
                            (g.message, g.metric.to_bits(), g.start_state),
                            (w.0, w.1.to_bits(), w.2),
                            "{spec:?} k={k} L={l}"
                        );
                        assert!(g.certified);
                    }
                }
            }
        }
    }
}

#[test]
fn best_first_search_matches_certified_list_on_the_rate_fifth_code() {
    let spec = ConvCodeSpec::rate_fifth();
    let t = Trellis::build(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for trial in 0..6 {
        let msg = rng.random::<u64>() & ((1 << 43) - 1);
        let cw = tb_encode(spec.generators(), 8, &bits_of(msg, 43));
        // Noisy but mostly reliable observations of a real codeword.
        let llrs: Vec<f64> = cw
            .iter()
            .map(|&b| (1.0 - 2.0 * b as f64) * 0.6 + rng.random_range(-1.2..1.2))
            .collect();
        let reference = lva_decode(&llrs, &t, 512).unwrap();
        let cert: Vec<_> = reference.iter().take_while(|c| c.certified).collect();
        assert!(!cert.is_empty(), "trial {trial}");
        let got = tb_list_decode(&llrs, &t, cert.len()).unwrap();
        for (g, w) in got.iter().zip(&cert) {
            assert_eq!(
                (g.message, g.metric.to_bits()),
                (w.message, w.metric.to_bits())
            );
        }
        let wider = tb_list_decode(&llrs, &t, 4 * cert.len()).unwrap();
        assert_eq!(&wider[..got.len()], got.as_slice());
    }
}
