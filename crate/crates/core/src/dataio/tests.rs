use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::polytope::is_unimodular_equivalent;

fn poly(v: &[[i64; 2]]) -> LatticePolytope {
    LatticePolytope::from_i64(&v.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn pentagon() -> LatticePolytope {
    poly(&[[1, 0], [0, -1], [-1, -1], [-1, 0], [0, 1]])
}

fn tuple(l: &Labels) -> (i64, BigRational, i64, Option<usize>, bool) {
    (l.volume, l.dual_volume.clone(), l.gorenstein_index, l.codimension, l.reflexive)
}

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

#[test]
fn label_examples() {
    assert_eq!(tuple(&label(&pentagon()).unwrap()), (5, q(7), 1, Some(5), true));
    let dual = poly(&[[1, 0], [1, -1], [0, -1], [-1, 0], [-1, 2]]);
    assert_eq!(tuple(&label(&dual).unwrap()), (7, q(5), 1, Some(3), true));
    let triangle = poly(&[[1, 0], [0, 1], [-1, -1]]);
    assert_eq!(tuple(&label(&triangle).unwrap()), (3, q(9), 1, Some(7), true));
    let big = poly(&[[-1, -1], [2, -1], [-1, 2]]);
    assert!(matches!(label(&big), Err(Error::NonSaturatedLattice(_))));
}

#[test]
fn generator_is_deterministic_and_valid() {
    let a = generate_fano_polygons(40, 5, 30, 7).unwrap();
    let b = generate_fano_polygons(40, 5, 30, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(generate_fano_polygons(1, 5, 30, 3).unwrap(), generate_fano_polygons(1, 5, 30, 3).unwrap());
    for (i, p) in a.iter().enumerate() {
        assert!(p.is_fano());
        assert_eq!(p.vertex_lattice_index(), BigInt::from(1));
        assert!(p.gorenstein_index().unwrap() <= BigInt::from(30));
        for other in &a[..i] {
            assert!(is_unimodular_equivalent(p, other).is_none());
        }
    }
}

#[test]
fn reflexive_generation_stays_within_sixteen_classes() {
    let found = generate_fano_polygons(12, 3, 1, 1).unwrap();
    let classes = enumerate_reflexive_polygons(3).unwrap();
    assert_eq!(classes.len(), 16);
    for p in &found {
        assert!(p.is_reflexive());
        assert!(classes.iter().any(|c| is_unimodular_equivalent(c, p).is_some()));
    }
    // all 16 classes exhaust the reflexive polygons, so asking for more starves
    let mut config = GeneratorConfig::polygons(17, 2, 1, 1);
    config.max_failed_attempts = 20_000;
    assert!(matches!(generate_with(&config), Err(Error::Starvation { .. })));
}

#[test]
fn canonical_3d_generation() {
    let ps = generate_canonical_fano_3d(30, 3, 5).unwrap();
    assert_eq!(ps, generate_canonical_fano_3d(30, 3, 5).unwrap());
    for p in &ps {
        assert_eq!(p.interior_lattice_points(), vec![vec![BigInt::from(0); 3]]);
    }
}

#[test]
fn augmentation() {
    let records: Vec<PolytopeRecord> = generate_fano_polygons(10, 5, 30, 2)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, p)| PolytopeRecord::new(i as u64, p))
        .collect();
    let mut labeled = records.clone();
    label_records(&mut labeled, false).unwrap();
    let once = augment(&labeled, 1, 4).unwrap();
    assert_eq!(once.len(), labeled.len());
    let rows = augment(&labeled, 3, 4).unwrap();
    assert_eq!(rows, augment(&labeled, 3, 4).unwrap());
    assert!(rows.len() <= 30);
    for r in &labeled {
        let mine: Vec<&PolytopeRecord> = rows.iter().filter(|x| x.id == r.id).collect();
        assert!(!mine.is_empty() && mine.len() <= 3);
        for (i, a) in mine.iter().enumerate() {
            assert_eq!(a.labels, r.labels);
            for b in &mine[..i] {
                assert_ne!(a.plucker, b.plucker);
            }
        }
    }
    assert!(augment(&labeled, 0, 4).is_err());
}

#[test]
fn jsonl_round_trip_and_errors() {
    let mut r = PolytopeRecord::new(3, pentagon());
    r.labels = Some(label(&pentagon()).unwrap());
    let mut half = PolytopeRecord::new(4, poly(&[[-1, -1], [1, 0], [0, 1]]));
    half.labels = Some(Labels {
        volume: 3,
        dual_volume: BigRational::new(BigInt::from(7), BigInt::from(2)),
        gorenstein_index: 2,
        codimension: None,
        reflexive: false,
    });
    half.plucker = vec![vec![1, 1, 1]];
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &[r.clone(), half.clone()]).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.contains("\"7/2\""));
    assert_eq!(read_jsonl(&buf[..]).unwrap(), vec![r.clone(), half.clone()]);
    let with_header = format!("{{\"config\":{{\"seed\":1}}}}\n{text}");
    assert_eq!(read_jsonl(with_header.as_bytes()).unwrap(), vec![r, half]);

    let bad = "{\"id\":1,\"vertices\":[[1,0],[0,1],[-1,-1]]}\n{\"id\":2,\"vertices\":[[1,0],[0,1,2],[-1,-1]]}\n";
    match read_jsonl(bad.as_bytes()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let mixed =
        "{\"id\":1,\"vertices\":[[1,0],[0,1],[-1,-1]]}\n{\"id\":2,\"vertices\":[[1,0,0],[0,1,0],[0,0,1],[-1,-1,-1]]}\n";
    assert!(matches!(read_jsonl(mixed.as_bytes()), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(read_jsonl("not json\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn feature_csv_round_trip() {
    let mut r = PolytopeRecord::new(0, pentagon());
    r.labels = Some(label_basic(&pentagon()).unwrap());
    let (data, width) = build_dataset(&[r.clone()], Encoding::Plucker, LabelKind::DualVolume, Some(12)).unwrap();
    assert_eq!(width, 12);
    assert_eq!(data.labels, vec![7.0]);
    let mut buf = Vec::new();
    write_feature_csv(&mut buf, &data).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("feature_0,feature_1,"));
    assert!(text.lines().next().unwrap().ends_with("feature_11,label"));
    let back = read_feature_csv(&buf[..]).unwrap();
    assert_eq!(back.features, data.features);
    assert_eq!(back.labels, data.labels);
    assert!(read_feature_csv("a,b\n1,2\n".as_bytes()).is_err());
    let commented = format!("# config: {{}}\n{text}");
    assert_eq!(read_feature_csv(commented.as_bytes()).unwrap().labels, data.labels);

    let (inv, _) = build_dataset(&[r], Encoding::InverseProblem, LabelKind::Volume, None).unwrap();
    assert_eq!(inv.features[0].len(), 10);
    assert_eq!(inv.features[0][9], 5.0);
}

#[test]
fn relabeling_reproduces_stored_labels() {
    let mut records: Vec<PolytopeRecord> = generate_fano_polygons(15, 4, 10, 9)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, p)| PolytopeRecord::new(i as u64, p))
        .collect();
    label_records(&mut records, true).unwrap();
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &records).unwrap();
    for r in read_jsonl(&buf[..]).unwrap() {
        assert_eq!(Some(label(&r.polytope).unwrap()), r.labels);
    }
}
