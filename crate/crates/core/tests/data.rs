mod common;

use std::collections::HashMap;
use std::fs;

use common::{labelled_store, mean, synthetic_store};
use lewisgame::data::{
    build_validation_set, decode_lfs1, encode_lfs1, generate_synthetic_features, load_feature_csv,
    load_feature_store, manifest_path, sample_different_image_game, sample_game, sample_noise_game,
    sample_same_image_game, split_store, ConceptPool, FeatureStore, GameMode, SplitConfig,
    SyntheticConfig,
};
use lewisgame::numerics::{cosine, RngStream, Stream};
use lewisgame::Error;

fn write_lfs1(path: &std::path::Path, n_header: u32, d: u32, rows: &[&[f32]]) {
    let mut bytes = b"LFS1".to_vec();
    bytes.extend(1u32.to_le_bytes());
    bytes.extend(n_header.to_le_bytes());
    bytes.extend(d.to_le_bytes());
    for r in rows {
        for v in *r {
            bytes.extend(v.to_le_bytes());
        }
    }
    fs::write(path, bytes).unwrap();
}

fn write_manifest(path: &std::path::Path, n: usize) {
    let entries: Vec<String> = (0..n)
        .map(|i| format!(r#"{{"image_id": "x{i}", "concept_id": {i}, "class_id": null}}"#))
        .collect();
    fs::write(manifest_path(path), format!("[{}]", entries.join(","))).unwrap();
}

#[test]
fn minimal_lfs1_file_loads_as_unit_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.lfs1");
    write_lfs1(&path, 2, 3, &[&[3.0, 4.0, 0.0], &[0.0, 0.0, 2.0]]);
    write_manifest(&path, 2);
    let store = load_feature_store(&path).unwrap();
    assert_eq!((store.len(), store.dim()), (2, 3));
    assert!((store.row(0)[0] - 0.6).abs() < 1e-7 && (store.row(0)[1] - 0.8).abs() < 1e-7);
    assert_eq!(store.row(1), &[0.0, 0.0, 1.0]);
    assert_eq!(store.class(0), None);
}

#[test]
fn lfs1_header_row_count_mismatch_is_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.lfs1");
    let row: &[f32] = &[1.0, 0.0];
    write_lfs1(&path, 5, 2, &[row, row, row, row]);
    write_manifest(&path, 5);
    assert!(matches!(load_feature_store(&path), Err(Error::Format { .. })));
}

#[test]
fn lfs1_rejects_bad_magic_and_zero_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.lfs1");
    write_lfs1(&path, 2, 2, &[&[1.0, 0.0], &[0.0, 0.0]]);
    write_manifest(&path, 2);
    match load_feature_store(&path) {
        Err(Error::Format { row, .. }) => assert_eq!(row, Some(1)),
        other => panic!("expected zero-norm format error, got {other:?}"),
    }
    let mut bytes = fs::read(&path).unwrap();
    bytes[0] = b'X';
    assert!(matches!(decode_lfs1(&bytes), Err(Error::Format { .. })));
}

#[test]
fn lfs1_manifest_length_is_cross_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.lfs1");
    write_lfs1(&path, 2, 2, &[&[1.0, 0.0], &[0.0, 1.0]]);
    write_manifest(&path, 3);
    assert!(load_feature_store(&path).is_err());
}

#[test]
fn save_then_load_round_trips_within_f32_rounding() {
    let store = synthetic_store(2, 3, 4, 16, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.lfs1");
    lewisgame::data::save_feature_store(&store, &path).unwrap();
    let back = load_feature_store(&path).unwrap();
    assert_eq!(back.manifest(), store.manifest());
    for (a, b) in back.features().as_slice().iter().zip(store.features().as_slice()) {
        assert!((a - b).abs() <= 1e-6);
    }
    // normalization on reload is idempotent
    let again = load_feature_store(&path).unwrap();
    assert_eq!(again.features(), back.features());
    assert_eq!(encode_lfs1(&back), encode_lfs1(&again));
}

#[test]
fn csv_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    fs::write(&path, "image_id,concept_id,class_id,f0,f1\na,0,1,3,4\nb,1,,0,2\n").unwrap();
    let store = load_feature_csv(&path).unwrap();
    assert_eq!(store.len(), 2);
    assert_eq!(store.class(0), Some(1));
    assert_eq!(store.class(1), None);
    assert!((store.row(0)[1] - 0.8).abs() < 1e-12);
}

#[test]
fn synthetic_shapes_and_degenerate_spread() {
    let s = synthetic_store(1, 1, 2, 8, 0);
    assert_eq!(s.len(), 2);
    assert_eq!(s.concept(0), s.concept(1));

    let cfg = SyntheticConfig {
        image_spread: 1e-14,
        n_classes: 2,
        concepts_per_class: 2,
        images_per_concept: 4,
        dim: 16,
        ..Default::default()
    };
    let s = generate_synthetic_features(&cfg, &mut RngStream::named(0, Stream::Data)).unwrap();
    for (_, rows) in s.rows_by_concept() {
        for &a in &rows {
            for &b in &rows {
                assert!((cosine(s.row(a), s.row(b)).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }
    let bad = SyntheticConfig {
        concept_spread: 0.0,
        ..Default::default()
    };
    assert!(bad.validate().is_err());
}

#[test]
fn default_synthetic_store_has_hierarchy() {
    let store = generate_synthetic_features(&SyntheticConfig::default(), &mut RngStream::named(0, Stream::Data)).unwrap();
    assert_eq!(store.len(), 5000);
    assert_eq!((store.n_concepts(), store.n_classes(), store.dim()), (50, 5, 64));
    for i in 0..store.len() {
        let n: f64 = store.row(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-9);
    }
    // every 7th row keeps this quadratic scan fast while covering every concept
    let rows: Vec<usize> = (0..store.len()).step_by(7).collect();
    let (mut concept, mut class, mut across) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &a) in rows.iter().enumerate() {
        for &b in &rows[k + 1..] {
            let c = cosine(store.row(a), store.row(b)).unwrap();
            if store.concept(a) == store.concept(b) {
                concept.push(c);
            } else if store.class(a) == store.class(b) {
                class.push(c);
            } else {
                across.push(c);
            }
        }
    }
    let (m_concept, m_class, m_across) = (mean(&concept), mean(&class), mean(&across));
    assert!(m_concept > m_class && m_class > m_across, "{m_concept} {m_class} {m_across}");
}

#[test]
fn synthetic_generation_is_deterministic() {
    let a = synthetic_store(2, 2, 5, 8, 42);
    let b = synthetic_store(2, 2, 5, 8, 42);
    let c = synthetic_store(2, 2, 5, 8, 43);
    assert_eq!(encode_lfs1(&a), encode_lfs1(&b));
    assert_ne!(encode_lfs1(&a), encode_lfs1(&c));
}

#[test]
fn splits_are_disjoint_and_keep_two_train_rows() {
    let store = synthetic_store(2, 3, 12, 8, 0);
    let cfg = SplitConfig {
        test_per_concept: 5,
        validation_per_concept: 5,
        seed: 0,
    };
    let split = split_store(&store, &cfg, &mut RngStream::named(0, Stream::Split));
    let mut seen = vec![0; store.len()];
    for r in split.train.iter().chain(&split.validation).chain(&split.test) {
        seen[*r] += 1;
    }
    assert!(seen.iter().all(|c| *c == 1));
    let pool = ConceptPool::new(&store, &split.train);
    assert_eq!(pool.n_concepts(), 6);
    for k in 0..pool.n_concepts() {
        assert!(pool.rows_of(k).len() >= 2);
    }
}

#[test]
fn same_image_pair_frequencies_are_uniform() {
    let store = labelled_store(&[0, 0, 1, 1, 2, 2, 3, 3], 4);
    let pool = ConceptPool::all(&store);
    let mut rng = RngStream::named(1, Stream::Sampling);
    let mut counts: HashMap<(i64, i64), usize> = HashMap::new();
    let n = 10_000;
    for _ in 0..n {
        let g = sample_same_image_game(&pool, &mut rng).unwrap();
        let (a, b) = (store.concept(g.sender_target), store.concept(g.sender_distractor));
        *counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let expected = n as f64 / 6.0;
    for c in counts.values() {
        assert!((*c as f64 - expected).abs() <= 0.2 * expected, "{counts:?}");
    }
}

#[test]
fn two_singleton_concepts_force_the_pair() {
    let store = labelled_store(&[0, 1], 3);
    let pool = ConceptPool::all(&store);
    let mut rng = RngStream::named(2, Stream::Sampling);
    let mut orders = [0usize; 2];
    for _ in 0..500 {
        let g = sample_same_image_game(&pool, &mut rng).unwrap();
        orders[g.sender_target] += 1;
        assert_eq!(g.sender_target + g.sender_distractor, 1);
    }
    assert!(orders[0] > 0 && orders[1] > 0);
    let lonely = labelled_store(&[0, 0, 0], 3);
    assert!(matches!(sample_same_image_game(&ConceptPool::all(&lonely), &mut rng), Err(Error::Dataset(_))));
}

#[test]
fn different_image_complements_and_position_frequency() {
    let store = labelled_store(&[0, 0, 1, 1], 3);
    let pool = ConceptPool::all(&store);
    let mut rng = RngStream::named(3, Stream::Sampling);
    let n = 10_000;
    let mut left = 0;
    for _ in 0..n {
        let g = sample_different_image_game(&pool, &mut rng).unwrap();
        let complement = |r: usize| r ^ 1;
        let rows = [g.receiver_left, g.receiver_right];
        assert_eq!(rows[g.target_position], complement(g.sender_target));
        assert_eq!(rows[1 - g.target_position], complement(g.sender_distractor));
        if g.target_position == 0 {
            left += 1;
        }
    }
    let f = left as f64 / n as f64;
    assert!((0.48..=0.52).contains(&f), "{f}");
}

#[test]
fn different_image_names_the_singleton_concept() {
    let store = labelled_store(&[0, 0, 7], 3);
    let err = sample_different_image_game(&ConceptPool::all(&store), &mut RngStream::new(0, 0)).unwrap_err();
    match err {
        Error::Dataset(msg) => assert!(msg.contains("concept 7"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn noise_games_are_unit_and_nearly_orthogonal() {
    let mut rng = RngStream::named(4, Stream::Noise);
    let mut total = 0.0;
    for _ in 0..1000 {
        let g = sample_noise_game(64, &mut rng).unwrap();
        g.check(None).unwrap();
        let [a, b] = &**g.noise.as_ref().unwrap();
        total += cosine(a, b).unwrap().abs();
    }
    assert!(total / 1000.0 <= 0.25);
    let g = sample_noise_game(4096, &mut rng).unwrap();
    assert_eq!(g.views(None).unwrap().sender_target.len(), 4096);
    assert!(sample_noise_game(1, &mut rng).is_err());
}

#[test]
fn validation_sets_replay() {
    let store = synthetic_store(1, 4, 3, 8, 0);
    let pool = ConceptPool::all(&store);
    let build = |n| build_validation_set(&pool, GameMode::SameImage, n, &mut RngStream::named(5, Stream::Validation)).unwrap();
    assert_eq!(build(1024).len(), 1024);
    assert_eq!(build(1), build(1));
    assert_eq!(build(64), build(64));
    assert!(build_validation_set(&pool, GameMode::Noise, 4, &mut RngStream::new(0, 0)).is_err());
    assert!(build_validation_set(&pool, GameMode::SameImage, 0, &mut RngStream::new(0, 0)).is_err());
}

#[test]
fn sampler_sequences_are_deterministic() {
    let store = synthetic_store(2, 2, 4, 8, 0);
    let pool = ConceptPool::all(&store);
    for mode in [GameMode::SameImage, GameMode::DifferentImage, GameMode::Noise] {
        let run = || {
            let mut rng = RngStream::named(8, Stream::Sampling);
            (0..50).map(|_| sample_game(mode, &pool, 8, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}

#[test]
fn game_views_follow_the_store() {
    let store: FeatureStore = synthetic_store(1, 3, 2, 8, 0);
    let pool = ConceptPool::all(&store);
    let g = sample_same_image_game(&pool, &mut RngStream::new(0, 0)).unwrap();
    let v = g.views(Some(&store)).unwrap();
    assert_eq!(v.sender_target, store.row(g.sender_target));
    assert_eq!(v.receiver()[g.target_position], store.row(g.sender_target));
    assert!(g.views(None).is_err());
}
