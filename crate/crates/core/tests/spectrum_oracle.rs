mod common;

use common::{concatenated_spectrum, dso_oracle, hi};
use listfec::adaptive::{adaptive_decode, classify, TrialClass};
use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::crc::CrcSpec;
use listfec::harness::ci95;
use listfec::registry::Scheme;
use listfec::spectrum::{dso_search, union_bound, weight_enumerator, CrcTbcc};
use listfec::tbcc::ConvCodeSpec;
use listfec::BitBlock;

fn toy() -> ConvCodeSpec {
    ConvCodeSpec::from_octal(&["7", "5"], 2).unwrap()
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

#[test]
fn enumerator_matches_brute_force_spectrum() {
    let cases: [(ConvCodeSpec, Option<u64>, usize); 4] = [
        (toy(), None, 6),
        (toy(), Some(0x9), 6),
        (
            ConvCodeSpec::from_octal(&["15", "17"], 3).unwrap(),
            Some(0xB),
            7,
        ),
        (ConvCodeSpec::rate_fifth(), Some(0x101), 9),
    ];
    for (conv, poly, k) in cases {
        let crc = poly.map(|p| CrcSpec::new(p).unwrap());
        let enc = CrcTbcc::new(&conv, crc, k).unwrap();
        let got = weight_enumerator(&enc, k).unwrap();
        let want = concatenated_spectrum(conv.generators(), conv.memory(), poly, k);
        assert_eq!(trim(got.counts().to_vec()), trim(want), "{conv:?} {poly:?}");
        assert_eq!(got.total(), 1 << k);
    }
}

#[test]
fn dso_search_matches_exhaustive_oracle() {
    let conv = toy();
    for m in [3, 4] {
        let r = dso_search(&conv, m, 8).unwrap();
        assert_eq!(
            r.best.crc.poly(),
            dso_oracle(conv.generators(), 2, m, 8),
            "m={m}"
        );
        assert_eq!(r.candidates.len(), 1 << (m - 1));
    }
}

#[test]
fn best_minimum_distance_never_shrinks_with_degree() {
    let conv = toy();
    let mut prev = 0;
    for m in 1..=6 {
        let d = dso_search(&conv, m, 8)
            .unwrap()
            .best
            .spectrum
            .d_min()
            .unwrap();
        assert!(d >= prev, "m={m}: {d} < {prev}");
        prev = d;
    }
}

#[test]
fn union_bound_dominates_full_list_word_errors() {
    // A list covering the whole codebook makes the first CRC-passing
    // candidate the maximum-likelihood codeword of the concatenated code.
    let k = 8;
    let scheme = Scheme::build("tbcc-7-5", Some("0x9"), k, None).unwrap();
    let enc = CrcTbcc::new(&toy(), Some(*scheme.crc()), k).unwrap();
    let spec = weight_enumerator(&enc, k).unwrap();
    let n = scheme.transmit_len();
    let full = 1 << (k + 3);
    for ebno in [2.0, 4.0] {
        let sigma = ChannelParams::new(ebno, k, n).sigma();
        let trials = 20_000;
        let mut ml_errors = 0u64;
        for t in 0..trials {
            let mut rng = trial_rng(31, t);
            let msg = BitBlock::random(&mut rng, k);
            let y = add_noise(&modulate(&scheme.transmit(&msg).unwrap()), sigma, &mut rng);
            let llrs = scheme.combine(&demodulate_llr(&y, sigma)).unwrap();
            let best = scheme
                .decoder()
                .decode_list(&llrs, full)
                .unwrap()
                .into_iter()
                .find(|c| scheme.crc().check_word(c.word, k + 3))
                .expect("the full codebook holds CRC words");
            ml_errors += u64::from(best.word >> 3 != msg.to_word());
            // Over an exact list the first CRC hit is the ML decision.
            let out = adaptive_decode(&llrs, scheme.decoder(), scheme.crc(), full).unwrap();
            let ml_msg = BitBlock::from_word(best.word >> 3, k);
            assert_eq!(classify(&out, &ml_msg), TrialClass::Correct, "trial {t}");
        }
        let wer = ml_errors as f64 / trials as f64;
        let ub = union_bound(&spec, k as f64 / n as f64, ebno);
        assert!(wer <= hi(ub, ci95(wer, trials)), "{ebno} dB: {wer} > {ub}");
    }
}
