use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use super::month::{month_of, MonthKey};
use super::record::{Comment, Post, RawComment, RawPost, Rejection};
use crate::error::{Error, Result};

/// How many per-record diagnostics are kept verbatim.
const MAX_DIAGNOSTICS: usize = 50;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestOptions {
    /// Drop communities whose mean monthly commenter count falls below this.
    pub min_monthly_commenters: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub comments: usize,
    pub posts: usize,
    pub skipped_comments: usize,
    pub skipped_posts: usize,
    pub deleted_authors: usize,
    pub duplicates: usize,
    pub filtered_comments: usize,
    pub filtered_communities: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl IngestStats {
    fn note(&mut self, what: &str, line: usize, reason: &dyn std::fmt::Display) {
        debug!("skipping {what} record {line}: {reason}");
        if self.diagnostics.len() < MAX_DIAGNOSTICS {
            self.diagnostics.push(format!("{what} {line}: {reason}"));
        }
    }

    pub fn skipped(&self) -> usize {
        self.skipped_comments + self.skipped_posts
    }
}

/// Immutable, indexed comment and post store.
#[derive(Debug, Clone)]
pub struct CorpusStore {
    comments: Vec<Comment>,
    posts: Vec<Post>,
    comment_index: HashMap<String, usize>,
    post_index: HashMap<String, usize>,
    by_community_month: BTreeMap<(String, MonthKey), Vec<usize>>,
    by_post: HashMap<String, Vec<usize>>,
    by_author_month: BTreeMap<(String, MonthKey), Vec<usize>>,
    posts_by_community_month: BTreeMap<(String, MonthKey), Vec<usize>>,
    comment_months: Vec<MonthKey>,
    stats: IngestStats,
}

enum Parsed<T> {
    Ok(T),
    Skip(String),
}

fn parse_line<R, T>(line: &str) -> Parsed<T>
where
    R: for<'de> Deserialize<'de>,
    T: TryFrom<R, Error = Rejection>,
{
    match serde_json::from_str::<R>(line) {
        Err(e) => Parsed::Skip(format!("malformed json: {e}")),
        Ok(raw) => match T::try_from(raw) {
            Ok(v) => Parsed::Ok(v),
            Err(r) => Parsed::Skip(r.to_string()),
        },
    }
}

impl CorpusStore {
    /// Loads newline-delimited dump files. An unreadable file is fatal;
    /// malformed records are counted and skipped.
    pub fn from_paths(comments: &Path, posts: &Path, opts: &IngestOptions) -> Result<Self> {
        let c = File::open(comments).map_err(|e| Error::io(comments, e))?;
        let p = File::open(posts).map_err(|e| Error::io(posts, e))?;
        Self::from_readers(BufReader::new(c), BufReader::new(p), opts)
    }

    pub fn from_readers(comments: impl BufRead, posts: impl BufRead, opts: &IngestOptions) -> Result<Self> {
        let mut stats = IngestStats::default();
        let mut cs = Vec::new();
        for (i, line) in comments.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_line::<RawComment, Comment>(&line) {
                Parsed::Ok(c) => cs.push(c),
                Parsed::Skip(reason) => {
                    if reason == Rejection::DeletedAuthor.to_string() {
                        stats.deleted_authors += 1;
                    } else {
                        stats.skipped_comments += 1;
                        stats.note("comment", i + 1, &reason);
                    }
                }
            }
        }
        let mut ps = Vec::new();
        for (i, line) in posts.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_line::<RawPost, Post>(&line) {
                Parsed::Ok(p) => ps.push(p),
                Parsed::Skip(reason) => {
                    stats.skipped_posts += 1;
                    stats.note("post", i + 1, &reason);
                }
            }
        }
        Ok(Self::assemble(cs, ps, stats, opts))
    }

    /// Admits in-memory dump records through the same validation as file ingestion.
    pub fn from_records(comments: Vec<RawComment>, posts: Vec<RawPost>, opts: &IngestOptions) -> Self {
        let mut stats = IngestStats::default();
        let mut cs = Vec::with_capacity(comments.len());
        for (i, raw) in comments.into_iter().enumerate() {
            match Comment::try_from(raw) {
                Ok(c) => cs.push(c),
                Err(Rejection::DeletedAuthor) => stats.deleted_authors += 1,
                Err(r) => {
                    stats.skipped_comments += 1;
                    stats.note("comment", i + 1, &r);
                }
            }
        }
        let mut ps = Vec::with_capacity(posts.len());
        for (i, raw) in posts.into_iter().enumerate() {
            match Post::try_from(raw) {
                Ok(p) => ps.push(p),
                Err(r) => {
                    stats.skipped_posts += 1;
                    stats.note("post", i + 1, &r);
                }
            }
        }
        Self::assemble(cs, ps, stats, opts)
    }

    /// Builds a store from already-normalized records.
    pub fn from_parts(comments: Vec<Comment>, posts: Vec<Post>, opts: &IngestOptions) -> Self {
        Self::assemble(comments, posts, IngestStats::default(), opts)
    }

    fn assemble(mut comments: Vec<Comment>, mut posts: Vec<Post>, mut stats: IngestStats, opts: &IngestOptions) -> Self {
        // First occurrence of an id wins.
        let mut seen = BTreeSet::new();
        comments.retain(|c| {
            let fresh = seen.insert(c.id.clone());
            if !fresh {
                stats.duplicates += 1;
            }
            fresh
        });
        seen.clear();
        posts.retain(|p| {
            let fresh = seen.insert(p.id.clone());
            if !fresh {
                stats.duplicates += 1;
            }
            fresh
        });

        if opts.min_monthly_commenters > 0 {
            let mut users: BTreeMap<&str, BTreeMap<MonthKey, BTreeSet<&str>>> = BTreeMap::new();
            for c in &comments {
                let m = month_of(c.created_at).expect("validated timestamp");
                users.entry(&c.community).or_default().entry(m).or_default().insert(&c.author);
            }
            let dropped: BTreeSet<String> = users
                .iter()
                .filter(|(_, months)| {
                    let total: usize = months.values().map(BTreeSet::len).sum();
                    (total as f64) / (months.len() as f64) < opts.min_monthly_commenters as f64
                })
                .map(|(c, _)| c.to_string())
                .collect();
            if !dropped.is_empty() {
                let before = comments.len();
                comments.retain(|c| !dropped.contains(&c.community));
                posts.retain(|p| !dropped.contains(&p.community));
                stats.filtered_comments = before - comments.len();
                stats.filtered_communities = dropped.into_iter().collect();
            }
        }

        comments.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        posts.sort_by(|a, b| a.id.cmp(&b.id));

        let mut store = CorpusStore {
            comment_index: HashMap::with_capacity(comments.len()),
            post_index: HashMap::with_capacity(posts.len()),
            by_community_month: BTreeMap::new(),
            by_post: HashMap::new(),
            by_author_month: BTreeMap::new(),
            posts_by_community_month: BTreeMap::new(),
            comment_months: Vec::new(),
            comments,
            posts,
            stats,
        };
        let mut months = BTreeSet::new();
        for (i, c) in store.comments.iter().enumerate() {
            let m = month_of(c.created_at).expect("validated timestamp");
            months.insert(m);
            store.comment_index.insert(c.id.clone(), i);
            store.by_community_month.entry((c.community.clone(), m)).or_default().push(i);
            store.by_post.entry(c.post_id.clone()).or_default().push(i);
            store.by_author_month.entry((c.author.clone(), m)).or_default().push(i);
        }
        for (i, p) in store.posts.iter().enumerate() {
            let m = month_of(p.created_at).expect("validated timestamp");
            store.post_index.insert(p.id.clone(), i);
            store.posts_by_community_month.entry((p.community.clone(), m)).or_default().push(i);
        }
        store.comment_months = months.into_iter().collect();
        store.stats.comments = store.comments.len();
        store.stats.posts = store.posts.len();
        if store.stats.skipped() > 0 {
            warn!(
                "skipped {} comment and {} post records",
                store.stats.skipped_comments, store.stats.skipped_posts
            );
        }
        store
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    /// All comments, ordered by `(created_at, id)`.
    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    /// All posts, ordered by id.
    pub fn posts(&self) -> &[Post] {
        &self.posts
    }

    pub fn comment(&self, id: &str) -> Option<&Comment> {
        self.comment_index.get(id).map(|&i| &self.comments[i])
    }

    pub fn post(&self, id: &str) -> Option<&Post> {
        self.post_index.get(id).map(|&i| &self.posts[i])
    }

    /// Comments posted in `community` during `month`, in time order.
    pub fn comments_in(&self, community: &str, month: MonthKey) -> impl Iterator<Item = &Comment> {
        self.by_community_month
            .get(&(community.to_string(), month))
            .into_iter()
            .flatten()
            .map(move |&i| &self.comments[i])
    }

    /// Comments under a post, in time order.
    pub fn comments_on(&self, post_id: &str) -> impl Iterator<Item = &Comment> {
        self.by_post.get(post_id).into_iter().flatten().map(move |&i| &self.comments[i])
    }

    pub fn comments_by(&self, author: &str, month: MonthKey) -> impl Iterator<Item = &Comment> {
        self.by_author_month
            .get(&(author.to_string(), month))
            .into_iter()
            .flatten()
            .map(move |&i| &self.comments[i])
    }

    pub fn posts_in(&self, community: &str, month: MonthKey) -> impl Iterator<Item = &Post> {
        self.posts_by_community_month
            .get(&(community.to_string(), month))
            .into_iter()
            .flatten()
            .map(move |&i| &self.posts[i])
    }

    /// Distinct months with at least one comment, ascending.
    pub fn months(&self) -> &[MonthKey] {
        &self.comment_months
    }

    /// Distinct communities with at least one comment, sorted.
    pub fn communities(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.by_community_month.keys().map(|(c, _)| c).collect();
        set.into_iter().cloned().collect()
    }

    pub fn has_community(&self, community: &str) -> bool {
        self.by_community_month
            .range((community.to_string(), MonthKey { year: i32::MIN, month: 1 })..)
            .next()
            .is_some_and(|((c, _), _)| c == community)
    }

    /// `(community, month)` buckets that hold comments.
    pub fn community_months(&self) -> impl Iterator<Item = (&str, MonthKey)> {
        self.by_community_month.keys().map(|(c, m)| (c.as_str(), *m))
    }

    /// Months in which `community` has comments.
    pub fn months_of(&self, community: &str) -> Vec<MonthKey> {
        self.community_months()
            .filter(|(c, _)| *c == community)
            .map(|(_, m)| m)
            .collect()
    }

    /// Same records with every comment created after `cutoff` removed. Posts are kept.
    pub fn truncated_at(&self, cutoff: i64) -> CorpusStore {
        let comments = self.comments.iter().filter(|c| c.created_at <= cutoff).cloned().collect();
        CorpusStore::from_parts(comments, self.posts.clone(), &IngestOptions::default())
    }
}
