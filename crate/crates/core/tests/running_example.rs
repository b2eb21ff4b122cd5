//! Golden values for the 30-character running example.

use opme::index::{BackstepEntry, OpIndex, ParamsBuilder};
use opme::oracle::{naive_lbd, naive_matches, naive_suffix_order, RUNNING_EXAMPLE as S};
use opme::{Encoding, RankValue};

const R: [usize; 30] =
    [30, 29, 22, 13, 2, 23, 8, 14, 20, 3, 16, 24, 11, 9, 15, 28, 7, 19, 12, 1, 21, 10, 27, 6, 18, 26, 17, 5, 25, 4];
const SAMPLED: [usize; 13] = [1, 4, 7, 8, 9, 11, 12, 16, 19, 20, 24, 28, 30];
/// (R-position, L, doubled B, D) for every unsampled row.
const ROWS: [(usize, usize, u32, usize); 17] = [
    (2, 2, 3, 4),
    (3, 2, 1, 2),
    (5, 2, 1, 1),
    (6, 3, 7, 3),
    (10, 3, 7, 1),
    (13, 2, 1, 3),
    (14, 3, 7, 3),
    (15, 2, 3, 1),
    (17, 3, 3, 4),
    (18, 3, 3, 5),
    (21, 2, 5, 1),
    (22, 2, 3, 2),
    (23, 4, 3, 2),
    (25, 4, 2, 3),
    (26, 4, 1, 1),
    (27, 2, 5, 3),
    (29, 2, 5, 4),
];

fn index() -> OpIndex {
    OpIndex::build(&S, ParamsBuilder::new().sample(4).occ_threshold(4).build(30).unwrap()).unwrap()
}

fn expected(i: usize) -> Option<BackstepEntry> {
    ROWS.iter().find(|r| r.0 == i).map(|&(_, l, b, d)| BackstepEntry {
        l: Some(l),
        b: Some(RankValue::from_doubled(b)),
        d: Some(d),
    })
}

#[test]
fn suffix_array_and_samples() {
    assert_eq!(naive_suffix_order(&S), R);
    let idx = index();
    assert_eq!(idx.sampled_positions(), SAMPLED);
    for &p in &SAMPLED {
        assert_eq!(idx.sampled_value(p), Some(R[p - 1]));
    }
    assert_eq!(idx.sampled_value(16), Some(28));
    assert_eq!(idx.sampled_value(19), Some(12));
    assert_eq!(idx.sampled_value(18), None);
}

#[test]
fn backstep_tables() {
    let idx = index();
    for i in 1..=30 {
        assert_eq!(idx.backstep_entry(i), expected(i), "row {i}");
    }
}

#[test]
fn reference_tables_agree() {
    let reference = naive_lbd(&S, 4, 4, 10);
    assert_eq!(reference.sampled_positions(), SAMPLED);
    for i in 1..=30 {
        let row = reference.rows[i - 1].map(|r| BackstepEntry { l: r.l, b: r.b, d: r.d });
        assert_eq!(row, expected(i), "row {i}");
    }
}

#[test]
fn worked_chain() {
    let idx = index();
    let p = [2, 3, 1, 2];
    assert_eq!(idx.prefix_searcher().query(&Encoding::parse("0.5 1.5 0.5 2").unwrap().to_doubled_vec()), (18, 18));

    let ext = idx.extension_encoding(18, &p).unwrap();
    assert_eq!(ext, Encoding::parse("0.5 1.5 2.5 0.5").unwrap());
    assert_eq!(idx.backward_step(18, &ext).unwrap(), 25);

    let ext = Encoding::parse("0.5 1.5 2.5 3.5 1").unwrap();
    assert_eq!(idx.backward_step(25, &ext).unwrap(), 27);
    let ext = Encoding::parse("0.5 0.5 1.5").unwrap();
    assert_eq!(idx.backward_step(27, &ext).unwrap(), 11);
    assert_eq!(idx.sampled_value(11), Some(16));

    for q in [idx.query_fast(&p).unwrap(), idx.query_slow(&p).unwrap()] {
        assert_eq!((q.count, q.position), (1, Some(19)));
    }
    assert_eq!(idx.scan_all(&p).unwrap(), vec![19]);
}

#[test]
fn counts_and_positions() {
    let idx = index();
    assert_eq!(idx.count(&[1, 2]).unwrap(), 15);
    assert_eq!(naive_matches(&S, &[1, 2]).count(), 15);
    assert_eq!(idx.count(&[7]).unwrap(), 30);
    assert!(idx.locate_one(&[1]).unwrap().is_some());
    assert_eq!(idx.scan_all(&[1]).unwrap(), (1..=30).collect::<Vec<_>>());
    assert!(idx.count(&[1, 2, 3, 4, 5, 6]).is_err());

    let wide = OpIndex::build(&S, ParamsBuilder::new().c(2, 1).sample(4).occ_threshold(4).build(30).unwrap()).unwrap();
    let none = [9, 1, 2, 3, 4, 5, 6, 7, 8];
    assert_eq!(naive_matches(&S, &none).count(), 0);
    assert_eq!(wide.locate_one(&none).unwrap(), None);
    assert_eq!(wide.query_slow(&none).unwrap().count, 0);
}

#[test]
fn intro_scan() {
    let text = [6, 3, 9, 2, 7, 5, 4, 8, 1];
    let idx = OpIndex::build(&text, ParamsBuilder::new().build(9).unwrap()).unwrap();
    assert_eq!(idx.scan_all(&[2, 1, 3]).unwrap(), vec![1, 6]);
}

#[test]
fn traced_chain_visits_worked_positions() {
    let t = index().trace_fast(&[2, 3, 1, 2]).unwrap();
    assert_eq!(t.range, Some((18, 18)));
    assert_eq!(t.visited, vec![18, 25, 27, 11]);
    assert_eq!((t.result.count, t.result.position), (1, Some(19)));
}
