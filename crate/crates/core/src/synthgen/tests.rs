use std::collections::{BTreeSet, HashMap};

use super::*;
use crate::corpus::{build_profiles, month_of};
use crate::error::Error;
use crate::loyalty::{loyalty_reports, mean_rates, LabelKind, LabelSet, LoyaltyParams};
use crate::textfeat::{build_comment_pairs, linguistic_features, Lexicons, PairSampling};

fn small(seed: u64) -> SynthConfig {
    SynthConfig {
        users_per_community: 120,
        seed,
        ..SynthConfig::default()
    }
}

#[test]
fn invalid_configs_rejected() {
    let cfg = SynthConfig {
        comments_per_loyal_user_month: 9,
        ..small(0)
    };
    assert!(matches!(generate(&cfg), Err(Error::Config(_))));
    let cfg = SynthConfig {
        loyal_fraction: 0.5,
        ..SynthConfig::with_rates(&[1.0])
    };
    assert!(matches!(generate(&cfg), Err(Error::Infeasible(_))));
    let cfg = SynthConfig {
        loyal_fraction: 1.0,
        leave_rate: 0.1,
        ..SynthConfig::with_rates(&[1.0])
    };
    assert!(generate(&cfg).is_ok());
}

#[test]
fn planted_labels_recovered_exactly() {
    for seed in 0..3 {
        let corpus = generate(&small(seed)).unwrap();
        let store = corpus.store();
        let labels = LabelSet::compute(&build_profiles(&store), &LoyaltyParams::default());
        let got = |kind| -> BTreeSet<(String, String, String)> {
            labels
                .of_kind(kind)
                .map(|l| (l.author.clone(), l.community.clone(), l.month.to_string()))
                .collect()
        };
        let want = |v: &[PlantedLabel]| -> BTreeSet<(String, String, String)> {
            v.iter().map(|l| (l.author.clone(), l.community.clone(), l.month.to_string())).collect()
        };
        assert_eq!(got(LabelKind::Loyal), want(&corpus.truth.loyal));
        assert_eq!(got(LabelKind::Vagrant), want(&corpus.truth.vagrant));
        assert!(!corpus.truth.loyal.is_empty() && !corpus.truth.vagrant.is_empty());
    }
}

#[test]
fn measured_rates_equal_realized_transitions() {
    let corpus = generate(&small(4)).unwrap();
    let profiles = build_profiles(&corpus.store());
    let reports = loyalty_reports(&profiles, &LoyaltyParams::default().community_level());
    for r in &reports {
        let t = &corpus.truth.transitions[&r.community][&r.month];
        assert_eq!((r.n_sustained, r.n_left_platform), (t.stayed, t.left));
        assert_eq!(r.n_preferrers, t.stayed + t.switched + t.left);
    }
    let measured = mean_rates(&reports);
    for (c, rate) in corpus.truth.realized_rates() {
        assert!((measured[&c] - rate).abs() < 1e-12);
    }
}

#[test]
fn replies_follow_parents_within_month() {
    let corpus = generate(&small(5)).unwrap();
    let by_id: HashMap<&str, &crate::corpus::Comment> = corpus.comments.iter().map(|c| (c.id.as_str(), c)).collect();
    let posts: HashMap<&str, i64> = corpus.posts.iter().map(|p| (p.id.as_str(), p.created_at)).collect();
    let mut replies = 0;
    for c in &corpus.comments {
        assert!(posts[c.post_id.as_str()] < c.created_at);
        if let Some(p) = &c.parent_id {
            let parent = by_id[p.as_str()];
            assert!(parent.created_at < c.created_at);
            assert_eq!(month_of(parent.created_at).unwrap(), month_of(c.created_at).unwrap());
            assert_eq!(parent.post_id, c.post_id);
            replies += 1;
        }
    }
    assert!(replies > 0);
}

#[test]
fn byte_identical_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let pa = generate(&small(6)).unwrap().write_to(a.path()).unwrap();
    let pb = generate(&small(6)).unwrap().write_to(b.path()).unwrap();
    for (x, y) in [(pa.comments, pb.comments), (pa.posts, pb.posts), (pa.truth, pb.truth)] {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let other = generate(&small(7)).unwrap();
    assert_ne!(other.comments, generate(&small(6)).unwrap().comments);
}

#[test]
fn pair_count_matches_co_commented_posts() {
    let corpus = generate(&small(8)).unwrap();
    let store = corpus.store();
    let labels = LabelSet::compute(&build_profiles(&store), &LoyaltyParams::default());
    for (community, &n) in &corpus.truth.co_commented_posts {
        let pairs = build_comment_pairs(&store, &labels, community, PairSampling::PerPost(1), 1);
        assert_eq!(pairs.len(), n);
        assert!(n > 0);
    }
}

#[test]
fn cohort_text_means_match_config() {
    let corpus = generate(&small(9)).unwrap();
    let lex = Lexicons::default();
    let cohort: HashMap<&str, Cohort> = corpus.truth.users.iter().map(|u| (u.name.as_str(), u.cohort)).collect();
    for (which, means) in &corpus.truth.cohort_means {
        let mut rate_i = Vec::new();
        let mut verb = Vec::new();
        for c in corpus.comments.iter().filter(|c| cohort[c.author.as_str()] == *which) {
            let f = linguistic_features::<f64>(&c.body, &lex);
            rate_i.push(f.rates.unwrap().i);
            verb.push(f.verbosity as f64);
        }
        for (xs, want) in [(&rate_i, means.rate_i), (&verb, means.verbosity)] {
            let m = crate::scalar::mean(xs).unwrap();
            let se = crate::scalar::sample_sd(xs).unwrap() / (xs.len() as f64).sqrt();
            assert!((m - want).abs() < 3.0 * se + 1e-9, "{which:?}: {m} vs {want} (se {se})");
        }
    }
}

#[test]
fn loyal_cohort_prefers_niche_posts() {
    let corpus = generate(&small(10)).unwrap();
    let score: HashMap<&str, i64> = corpus.posts.iter().map(|p| (p.id.as_str(), p.score)).collect();
    let cohort: HashMap<&str, Cohort> = corpus.truth.users.iter().map(|u| (u.name.as_str(), u.cohort)).collect();
    let mean_score = |want: Cohort| {
        let s: Vec<f64> = corpus
            .comments
            .iter()
            .filter(|c| c.is_top_level() && cohort[c.author.as_str()] == want)
            .map(|c| score[c.post_id.as_str()] as f64)
            .collect();
        crate::scalar::mean(&s).unwrap()
    };
    assert!(mean_score(Cohort::Core) < mean_score(Cohort::Casual));
}
