use opme::index::{BackstepEntry, OpIndex, ParamsBuilder};
use opme::oracle::{naive_lbd, naive_matches};
use opme::order_isomorphic;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_text(rng: &mut ChaCha8Rng, n: usize, sigma: u64) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(0..sigma)).collect()
}

/// Substrings, perturbed substrings and random values.
fn patterns(rng: &mut ChaCha8Rng, text: &[u64], max_m: usize, count: usize) -> Vec<Vec<u64>> {
    (0..count)
        .map(|k| {
            let m = rng.gen_range(1..=max_m.min(text.len()));
            match k % 3 {
                0 => {
                    let j = rng.gen_range(0..=text.len() - m);
                    text[j..j + m].to_vec()
                }
                1 => {
                    let j = rng.gen_range(0..=text.len() - m);
                    let mut p = text[j..j + m].to_vec();
                    let t = rng.gen_range(0..m);
                    p[t] = p[t].wrapping_add(rng.gen_range(1..3));
                    p
                }
                _ => (0..m).map(|_| rng.gen_range(0..8)).collect(),
            }
        })
        .collect()
}

#[test]
fn random_texts_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..24 {
        let n = rng.gen_range(64..600);
        let sigma = [2, 4, 16, 1 << 30][round % 4];
        let text = random_text(&mut rng, n, sigma);
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(n).unwrap()).unwrap();
        let max_m = idx.params().max_pattern_len();
        for p in patterns(&mut rng, &text, max_m, 60) {
            let truth = naive_matches(&text, &p);
            let fast = idx.query_fast(&p).unwrap();
            let slow = idx.query_slow(&p).unwrap();
            assert_eq!(fast.count, truth.count(), "n={n} sigma={sigma} p={p:?}");
            assert_eq!(slow.count, truth.count(), "n={n} sigma={sigma} p={p:?}");
            for pos in [fast.position, slow.position] {
                assert_eq!(pos.is_some(), truth.count() > 0);
                if let Some(j) = pos {
                    assert!(order_isomorphic(&text[j - 1..j - 1 + p.len()], &p));
                }
            }
            assert_eq!(idx.scan_all(&p).unwrap(), truth.positions);
        }
    }
}

#[test]
fn tables_match_reference_on_random_texts() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let n = rng.gen_range(8..90);
        let sigma = [2, 3, 5, 1000][rng.gen_range(0..4)];
        let text = random_text(&mut rng, n, sigma);
        let sample: usize = rng.gen_range(1..=4);
        let threshold = rng.gen_range(sample.saturating_sub(1)..=sample + 2);
        let params = ParamsBuilder::new().c(2, 1).sample(sample).occ_threshold(threshold).build(n);
        let Ok(params) = params else { continue };
        let idx = OpIndex::build(&text, params).unwrap();
        let reference = naive_lbd(&text, sample, threshold, params.ell);
        assert_eq!(idx.sampled_positions(), reference.sampled_positions());
        for i in 1..=n {
            let row = reference.rows[i - 1].map(|r| BackstepEntry { l: r.l, b: r.b, d: r.d });
            assert_eq!(idx.backstep_entry(i), row, "text={text:?} sample={sample} thr={threshold} i={i}");
        }
    }
}

#[test]
fn serialization_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let n = rng.gen_range(2..400);
        let text = random_text(&mut rng, n, 10);
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(n).unwrap()).unwrap();
        let bytes = idx.to_bytes();
        let back = OpIndex::from_bytes(&bytes).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(idx.stats().total_bits, 8 * bytes.len());
    }
}

#[test]
fn corrupt_files_are_rejected() {
    let text: Vec<u64> = (0..200).map(|k| (k * 7919) % 31).collect();
    let bytes = OpIndex::build(&text, ParamsBuilder::new().build(200).unwrap()).unwrap().to_bytes();
    assert!(OpIndex::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    assert!(OpIndex::from_bytes(b"NOPE").is_err());
    let mut bad = bytes.clone();
    bad[4] = 99;
    assert!(OpIndex::from_bytes(&bad).is_err());
    let mut extra = bytes.clone();
    extra.push(0);
    assert!(OpIndex::from_bytes(&extra).is_err());
    // flipping bits anywhere must never panic
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let mut b = bytes.clone();
        let k = rng.gen_range(0..b.len());
        b[k] ^= 1 << rng.gen_range(0..8);
        if let Ok(idx) = OpIndex::from_bytes(&b) {
            let _ = idx.query_fast(&[1, 2, 3]);
        }
    }
}

#[test]
fn tiny_texts() {
    for text in [vec![5u64, 5], vec![1, 2], vec![2, 1, 2], vec![7; 9]] {
        let n = text.len();
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(n).unwrap()).unwrap();
        for m in 1..=idx.params().max_pattern_len() {
            for j in 0..=n - m {
                let p = &text[j..j + m];
                assert_eq!(idx.count(p).unwrap(), naive_matches(&text, p).count());
            }
        }
    }
    assert!(OpIndex::build(&[1], ParamsBuilder::new().build(2).unwrap()).is_err());
}

#[test]
fn whole_suffixes_stored_accept_any_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..400 {
        let n = rng.gen_range(2..30);
        let sigma = rng.gen_range(1..6);
        let text = random_text(&mut rng, n, sigma);
        let Ok(params) = ParamsBuilder::new().ell(n).sample(rng.gen_range(1..4)).build(n) else { continue };
        let idx = OpIndex::build(&text, params).unwrap();
        for m in 1..=n {
            for j in 0..=n - m {
                let p = &text[j..j + m];
                let truth = naive_matches(&text, p).count();
                assert_eq!(idx.query_fast(p).unwrap().count, truth, "{text:?} {p:?}");
                assert_eq!(idx.query_slow(p).unwrap().count, truth, "{text:?} {p:?}");
            }
        }
        assert_eq!(idx.count(&vec![1; n + 1]).unwrap(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_and_slow_agree(text in prop::collection::vec(0u64..5, 16..160), seeds in prop::collection::vec(any::<u64>(), 20)) {
        let n = text.len();
        let idx = OpIndex::build(&text, ParamsBuilder::new().build(n).unwrap()).unwrap();
        let max_m = idx.params().max_pattern_len();
        for s in seeds {
            let m = 1 + (s as usize) % max_m;
            let j = (s >> 20) as usize % (n - m + 1);
            let p = &text[j..j + m];
            let (fast, slow) = (idx.query_fast(p).unwrap(), idx.query_slow(p).unwrap());
            prop_assert_eq!(fast.count, slow.count);
            prop_assert_eq!(fast.count, naive_matches(&text, p).count());
        }
    }

    #[test]
    fn monotone_transform_gives_identical_bytes(text in prop::collection::vec(0u64..40, 2..200)) {
        let n = text.len();
        let params = ParamsBuilder::new().build(n).unwrap();
        let spread: Vec<u64> = text.iter().map(|&x| (x << 24) + x * x + 11).collect();
        prop_assert_eq!(OpIndex::build(&text, params).unwrap().to_bytes(), OpIndex::build(&spread, params).unwrap().to_bytes());
    }
}
