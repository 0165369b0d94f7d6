use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;

use super::config::SynthConfig;
use super::text::Vocabulary;
use super::truth::{Cohort, CohortMeans, GroundTruth, PlantedLabel, PlantedUser, Transitions};
use crate::corpus::{Comment, CorpusStore, IngestOptions, MonthKey, Post};
use crate::error::Result;
use crate::rng::{task_rng, Key, TaskRng};

/// A generated corpus with its planted ground truth.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub comments: Vec<Comment>,
    pub posts: Vec<Post>,
    pub truth: GroundTruth,
}

impl SynthCorpus {
    pub fn store(&self) -> CorpusStore {
        CorpusStore::from_parts(self.comments.clone(), self.posts.clone(), &IngestOptions::default())
    }
}

struct UserState {
    name: String,
    cohort: Cohort,
    home: usize,
    arrival: usize,
    current: Option<usize>,
}

struct Builder<'a> {
    cfg: &'a SynthConfig,
    rng: TaskRng,
    vocab: Vocabulary,
    comments: Vec<Comment>,
    comment_post: Vec<usize>,
    posts: Vec<Post>,
}

impl Builder<'_> {
    fn body(&mut self, cohort: Cohort) -> String {
        if !self.cfg.render_text {
            return String::new();
        }
        let profile = match cohort {
            Cohort::Core => &self.cfg.loyal_profile,
            Cohort::Casual => &self.cfg.vagrant_profile,
        };
        self.vocab.comment(profile, &mut self.rng)
    }

    fn push_comment(&mut self, parent: Option<usize>, post: usize, author: &str, cohort: Cohort, t: i64) -> usize {
        let body = self.body(cohort);
        let id = format!("c{}", self.comments.len());
        let p = &self.posts[post];
        let c = Comment {
            id,
            parent_id: parent.map(|i| self.comments[i].id.clone()),
            post_id: p.id.clone(),
            community: p.community.clone(),
            author: author.to_string(),
            created_at: t,
            body,
            score: self.rng.random_range(1..=10),
        };
        self.comments.push(c);
        self.comment_post.push(post);
        self.comments.len() - 1
    }
}

fn other_community<R: Rng>(rng: &mut R, n: usize, current: usize) -> usize {
    let k = rng.random_range(0..n - 1);
    if k >= current {
        k + 1
    } else {
        k
    }
}

/// Generates a corpus from one seeded stream. Users are scheduled first,
/// then posts, top-level comments, and reply trees are emitted month by month.
pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus> {
    cfg.validate()?;
    let mut rng = task_rng(cfg.seed, &[Key::from("synth")]);
    let vocab = Vocabulary::new(cfg.communities.len(), cfg.esoteric_vocab_size, &mut rng);
    let months: Vec<MonthKey> = cfg.months.iter().collect();
    let nc = cfg.communities.len();
    let upc = cfg.users_per_community;
    let n_core = (cfg.loyal_fraction * upc as f64).round() as usize;
    let width = (nc * upc).max(1).to_string().len();
    let mut users: Vec<UserState> = Vec::with_capacity(nc * upc);
    for home in 0..nc {
        for j in 0..upc {
            users.push(UserState {
                name: format!("u{:0width$}", home * upc + j),
                cohort: if j < n_core { Cohort::Core } else { Cohort::Casual },
                home,
                arrival: rng.random_range(0..cfg.arrival_months.min(months.len())),
                current: None,
            });
        }
    }

    let mut b = Builder {
        cfg,
        rng,
        vocab,
        comments: Vec::new(),
        comment_post: Vec::new(),
        posts: Vec::new(),
    };
    let mut loyal = Vec::new();
    let mut vagrant = Vec::new();
    let mut transitions: BTreeMap<String, BTreeMap<MonthKey, Transitions>> = BTreeMap::new();

    for (ti, &month) in months.iter().enumerate() {
        let start = month.start_timestamp();
        let len = month.end_timestamp() - start + 1;

        // posts: niche first, at least one of each kind
        let mut niche: Vec<Vec<usize>> = vec![Vec::new(); nc];
        let mut popular: Vec<Vec<usize>> = vec![Vec::new(); nc];
        let ppm = cfg.posts.posts_per_community_month;
        let n_niche = ((cfg.posts.niche_fraction * ppm as f64).round() as usize).clamp(1, ppm - 1);
        for c in 0..nc {
            for k in 0..ppm {
                let is_niche = k < n_niche;
                let (lo, hi) = if is_niche {
                    (cfg.posts.niche_score_min, cfg.posts.niche_score_max)
                } else {
                    (cfg.posts.popular_score_min, cfg.posts.popular_score_max)
                };
                let title = if cfg.render_text {
                    b.vocab.post_title(c, is_niche, &mut b.rng)
                } else {
                    String::new()
                };
                let id = format!("p{}", b.posts.len());
                b.posts.push(Post {
                    id,
                    community: cfg.communities[c].name.clone(),
                    author: format!("poster{}", b.rng.random_range(0..1000)),
                    created_at: start + b.rng.random_range(0..len / 2),
                    title,
                    body: None,
                    score: b.rng.random_range(lo..=hi),
                    num_comments: 0,
                });
                if is_niche {
                    niche[c].push(b.posts.len() - 1);
                } else {
                    popular[c].push(b.posts.len() - 1);
                }
            }
        }

        // top-level comments
        let mut active: Vec<Vec<usize>> = vec![Vec::new(); nc];
        let mut roots: Vec<Vec<usize>> = vec![Vec::new(); nc];
        for (ui, u) in users.iter_mut().enumerate() {
            if ti < u.arrival {
                continue;
            }
            if ti == u.arrival {
                u.current = Some(u.home);
            }
            let Some(c) = u.current else { continue };
            active[c].push(ui);
            let (count, pref) = match u.cohort {
                Cohort::Core => (
                    cfg.comments_per_loyal_user_month + b.rng.random_range(0..=cfg.extra_loyal_comments),
                    cfg.loyal_profile.niche_preference,
                ),
                Cohort::Casual => (b.rng.random_range(1..=3), cfg.vagrant_profile.niche_preference),
            };
            for _ in 0..count {
                let pool = if b.rng.random_bool(pref) { &niche[c] } else { &popular[c] };
                let post = pool[b.rng.random_range(0..pool.len())];
                let t = b.posts[post].created_at + b.rng.random_range(1..len / 4);
                let name = u.name.clone();
                let idx = b.push_comment(None, post, &name, u.cohort, t);
                roots[c].push(idx);
            }
        }

        // reply trees
        let geo = &cfg.replies;
        for c in 0..nc {
            if active[c].len() < 2 {
                continue;
            }
            let reply_rate = cfg.communities[c].reply_rate;
            for &root in &roots[c] {
                let mut stack = vec![(root, 0u32)];
                while let Some((parent, depth)) = stack.pop() {
                    if depth >= geo.max_depth {
                        continue;
                    }
                    let p = if depth == 0 { reply_rate } else { geo.continue_prob };
                    for _ in 0..geo.max_children {
                        if !b.rng.random_bool(p) {
                            continue;
                        }
                        let ui = active[c][b.rng.random_range(0..active[c].len())];
                        if users[ui].name == b.comments[parent].author {
                            continue;
                        }
                        let t = b.comments[parent].created_at + b.rng.random_range(1..=600);
                        let post_idx = b.comment_post[parent];
                        let name = users[ui].name.clone();
                        let child = b.push_comment(Some(parent), post_idx, &name, users[ui].cohort, t);
                        stack.push((child, depth + 1));
                    }
                }
            }
        }

        // transitions into the next month
        if ti + 1 == months.len() {
            break;
        }
        for u in users.iter_mut() {
            let Some(c) = u.current else { continue };
            let label = || PlantedLabel {
                author: u.name.clone(),
                community: cfg.communities[c].name.clone(),
                month,
            };
            match u.cohort {
                Cohort::Core => {
                    let tr = transitions
                        .entry(cfg.communities[c].name.clone())
                        .or_default()
                        .entry(month)
                        .or_default();
                    if b.rng.random_bool(cfg.leave_rate) {
                        tr.left += 1;
                        u.current = None;
                    } else if b.rng.random_bool(cfg.communities[c].loyalty_rate) {
                        tr.stayed += 1;
                        loyal.push(label());
                    } else {
                        tr.switched += 1;
                        u.current = Some(other_community(&mut b.rng, nc, c));
                    }
                }
                Cohort::Casual => {
                    if b.rng.random_bool(cfg.vagrant_rate) {
                        vagrant.push(label());
                        u.current = Some(other_community(&mut b.rng, nc, c));
                    }
                }
            }
        }
    }

    let Builder { comments, mut posts, .. } = b;
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for c in &comments {
        *counts.entry(c.post_id.as_str()).or_default() += 1;
    }
    for p in posts.iter_mut() {
        p.num_comments = counts.get(p.id.as_str()).copied().unwrap_or(0);
    }
    drop(counts);
    loyal.sort();
    vagrant.sort();

    let co_commented_posts = co_commented(&comments, &loyal, &vagrant);
    let means = |p: &super::config::CohortProfile| CohortMeans {
        verbosity: (p.tokens_min + p.tokens_max) as f64 / 2.0,
        rate_i: p.rate_i,
        rate_you: p.rate_you,
        rate_we: p.rate_we,
        rate_affect_pos: p.rate_affect_pos,
        rate_affect_neg: p.rate_affect_neg,
        niche_preference: p.niche_preference,
    };
    let truth = GroundTruth {
        config: cfg.clone(),
        users: users
            .iter()
            .map(|u| PlantedUser {
                name: u.name.clone(),
                cohort: u.cohort,
                home: cfg.communities[u.home].name.clone(),
                arrival: months[u.arrival],
            })
            .collect(),
        loyal,
        vagrant,
        planted_rates: cfg.communities.iter().map(|c| (c.name.clone(), c.loyalty_rate)).collect(),
        transitions,
        cohort_means: [(Cohort::Core, means(&cfg.loyal_profile)), (Cohort::Casual, means(&cfg.vagrant_profile))].into(),
        co_commented_posts,
    };
    Ok(SynthCorpus { comments, posts, truth })
}

fn co_commented(comments: &[Comment], loyal: &[PlantedLabel], vagrant: &[PlantedLabel]) -> BTreeMap<String, usize> {
    let key = |l: &PlantedLabel| (l.author.clone(), l.community.clone(), l.month);
    let loyal: HashSet<_> = loyal.iter().map(key).collect();
    let vagrant: HashSet<_> = vagrant.iter().map(key).collect();
    let mut seen: BTreeMap<&str, (&str, bool, bool)> = BTreeMap::new();
    for c in comments.iter().filter(|c| c.is_top_level()) {
        let m = crate::corpus::month_of(c.created_at).expect("generated timestamps are positive");
        let k = (c.author.clone(), c.community.clone(), m);
        let slot = seen.entry(c.post_id.as_str()).or_insert((c.community.as_str(), false, false));
        slot.1 |= loyal.contains(&k);
        slot.2 |= vagrant.contains(&k);
    }
    let mut out: BTreeMap<String, usize> = BTreeMap::new();
    for (community, l, v) in seen.into_values() {
        if l && v {
            *out.entry(community.to_string()).or_default() += 1;
        }
    }
    out
}
