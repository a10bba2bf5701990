use stemgeo::evaluation::{
    aggregate, generate_field, match_pairs, match_stems, read_ground_truth, write_ground_truth, FieldSpec,
};
use stemgeo::{detect_all, DetectorConfig};

#[test]
fn synthetic_field_is_recovered_end_to_end() {
    let field = generate_field(20, (960, 1280), &FieldSpec::default(), 99).unwrap();
    let truth = field.ground_truth("field");
    let stems = detect_all(&field.mask, &DetectorConfig::default(), 11, 32).unwrap();
    assert_eq!(stems.len(), 20);
    let report = match_stems(&stems, &truth, 10.0);
    assert!(report.recall >= 0.95 && report.precision >= 0.95, "{report:?}");

    let total = aggregate(&[report, report]).unwrap();
    assert_eq!(total.tp, 2 * report.tp);
    assert_eq!(total.recall, report.recall);
}

#[test]
fn ground_truth_files_round_trip() {
    let field = generate_field(5, (300, 400), &FieldSpec::default(), 4).unwrap();
    let truth = field.ground_truth("plot_07");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("truth.csv");
    write_ground_truth(&path, &truth).unwrap();
    let back = read_ground_truth(&path).unwrap();
    assert_eq!(back.len(), truth.len());
    for (a, b) in back.iter().zip(&truth) {
        assert_eq!(a.image_id, b.image_id);
        assert!(a.position.distance(b.position) <= 0.005 * 2f64.sqrt() + 1e-12);
    }
    let positions: Vec<_> = truth.iter().map(|t| t.position).collect();
    let mut pairs = match_pairs(&positions, &back.iter().map(|t| t.position).collect::<Vec<_>>(), 0.5);
    pairs.sort_unstable();
    assert_eq!(pairs, (0..5).map(|i| (i, i)).collect::<Vec<_>>());
}
