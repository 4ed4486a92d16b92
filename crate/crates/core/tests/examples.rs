macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(validate_spec, validate_spec_runs, "validate_spec.rs");
example!(family_taxonomy, family_taxonomy_runs, "family_taxonomy.rs");
example!(metric_kernels, metric_kernels_runs, "metric_kernels.rs");
example!(score_candidate, score_candidate_runs, "score_candidate.rs");
example!(group_advantages, group_advantages_runs, "group_advantages.rs");
example!(curate_corpus, curate_corpus_runs, "curate_corpus.rs");
example!(reward_server, reward_server_runs, "reward_server.rs");
