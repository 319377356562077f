use symdet::harness::corpus_text;

const FIXTURE: &str = include_str!("fixtures/corpus.json");

#[test]
fn corpus_matches_fixture_byte_for_byte() {
    let text = corpus_text(Some(1)).unwrap();
    assert!(
        text == FIXTURE,
        "regenerated corpus differs from tests/fixtures/corpus.json"
    );
}

#[test]
fn corpus_does_not_depend_on_worker_count() {
    assert_eq!(corpus_text(Some(1)).unwrap(), corpus_text(Some(2)).unwrap());
}
