//! Dump-format records and their normalized forms.
//!
//! Field names follow the public Reddit comment/submission dumps, so real
//! files load without conversion. Numeric fields are accepted either as
//! JSON numbers or as decimal strings, since both occur in the dumps.

use serde::{Deserialize, Deserializer, Serialize};

pub const DELETED_AUTHOR: &str = "[deleted]";

fn flex_i64<'de, D: Deserializer<'de>>(d: D) -> Result<Option<i64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Flex {
        Int(i64),
        Float(f64),
        Str(String),
    }
    Ok(match Option::<Flex>::deserialize(d)? {
        None => None,
        Some(Flex::Int(v)) => Some(v),
        Some(Flex::Float(v)) if v.is_finite() => Some(v as i64),
        Some(Flex::Float(_)) => None,
        Some(Flex::Str(s)) => s.trim().parse().ok(),
    })
}

/// Comment as it appears in the dump.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawComment {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub parent_id: Option<String>,
    #[serde(default)]
    pub link_id: Option<String>,
    #[serde(default)]
    pub subreddit: Option<String>,
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default, deserialize_with = "flex_i64")]
    pub created_utc: Option<i64>,
    #[serde(default)]
    pub body: Option<String>,
    #[serde(default, deserialize_with = "flex_i64")]
    pub score: Option<i64>,
}

/// Submission as it appears in the dump.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawPost {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub subreddit: Option<String>,
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default, deserialize_with = "flex_i64")]
    pub created_utc: Option<i64>,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub selftext: Option<String>,
    #[serde(default, deserialize_with = "flex_i64")]
    pub score: Option<i64>,
    #[serde(default, deserialize_with = "flex_i64")]
    pub num_comments: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub id: String,
    /// Parent comment id; `None` when the comment answers the post directly.
    pub parent_id: Option<String>,
    pub post_id: String,
    pub community: String,
    pub author: String,
    pub created_at: i64,
    pub body: String,
    pub score: i64,
}

impl Comment {
    pub fn is_top_level(&self) -> bool {
        self.parent_id.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Post {
    pub id: String,
    pub community: String,
    pub author: String,
    pub created_at: i64,
    pub title: String,
    pub body: Option<String>,
    pub score: i64,
    pub num_comments: u64,
}

impl Post {
    /// Title and body joined, the unit of text for post-level features.
    pub fn text(&self) -> String {
        match &self.body {
            Some(b) if !b.is_empty() => format!("{}\n{}", self.title, b),
            _ => self.title.clone(),
        }
    }
}

/// Why a record was not admitted into the store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    Missing(&'static str),
    BadTimestamp(i64),
    DeletedAuthor,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Missing(field) => write!(f, "missing required field `{field}`"),
            Rejection::BadTimestamp(t) => write!(f, "non-positive created_utc {t}"),
            Rejection::DeletedAuthor => write!(f, "deleted author"),
        }
    }
}

fn strip_kind(id: &str) -> &str {
    match id.split_once('_') {
        Some((kind, rest)) if kind.len() == 2 && kind.starts_with('t') => rest,
        _ => id,
    }
}

fn required(v: Option<String>, field: &'static str) -> Result<String, Rejection> {
    match v {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(Rejection::Missing(field)),
    }
}

impl TryFrom<RawComment> for Comment {
    type Error = Rejection;

    fn try_from(raw: RawComment) -> Result<Self, Rejection> {
        let id = required(raw.id, "id")?;
        let link_id = required(raw.link_id, "link_id")?;
        let community = required(raw.subreddit, "subreddit")?;
        let author = required(raw.author, "author")?;
        let created_at = raw.created_utc.ok_or(Rejection::Missing("created_utc"))?;
        let body = raw.body.ok_or(Rejection::Missing("body"))?;
        let score = raw.score.ok_or(Rejection::Missing("score"))?;
        if created_at <= 0 {
            return Err(Rejection::BadTimestamp(created_at));
        }
        if author == DELETED_AUTHOR {
            return Err(Rejection::DeletedAuthor);
        }
        let post_id = strip_kind(&link_id).to_string();
        // Top-level iff the parent designates the post (t3_ prefix or the link id itself).
        let parent_id = match raw.parent_id.as_deref() {
            None | Some("") => None,
            Some(p) if p == link_id || p.starts_with("t3_") => None,
            Some(p) if strip_kind(p) == post_id => None,
            Some(p) => Some(strip_kind(p).to_string()),
        };
        Ok(Comment {
            id: strip_kind(&id).to_string(),
            parent_id,
            post_id,
            community,
            author,
            created_at,
            body,
            score,
        })
    }
}

impl TryFrom<RawPost> for Post {
    type Error = Rejection;

    fn try_from(raw: RawPost) -> Result<Self, Rejection> {
        let id = required(raw.id, "id")?;
        let community = required(raw.subreddit, "subreddit")?;
        let author = required(raw.author, "author")?;
        let created_at = raw.created_utc.ok_or(Rejection::Missing("created_utc"))?;
        let title = raw.title.ok_or(Rejection::Missing("title"))?;
        let score = raw.score.ok_or(Rejection::Missing("score"))?;
        let num_comments = raw.num_comments.ok_or(Rejection::Missing("num_comments"))?;
        if created_at <= 0 {
            return Err(Rejection::BadTimestamp(created_at));
        }
        Ok(Post {
            id: strip_kind(&id).to_string(),
            community,
            author,
            created_at,
            title,
            body: raw.selftext.filter(|s| !s.is_empty()),
            score,
            num_comments: num_comments.max(0) as u64,
        })
    }
}

impl From<&Comment> for RawComment {
    fn from(c: &Comment) -> Self {
        RawComment {
            id: Some(c.id.clone()),
            parent_id: Some(match &c.parent_id {
                Some(p) => format!("t1_{p}"),
                None => format!("t3_{}", c.post_id),
            }),
            link_id: Some(format!("t3_{}", c.post_id)),
            subreddit: Some(c.community.clone()),
            author: Some(c.author.clone()),
            created_utc: Some(c.created_at),
            body: Some(c.body.clone()),
            score: Some(c.score),
        }
    }
}

impl From<&Post> for RawPost {
    fn from(p: &Post) -> Self {
        RawPost {
            id: Some(p.id.clone()),
            subreddit: Some(p.community.clone()),
            author: Some(p.author.clone()),
            created_utc: Some(p.created_at),
            title: Some(p.title.clone()),
            selftext: Some(p.body.clone().unwrap_or_default()),
            score: Some(p.score),
            num_comments: Some(p.num_comments as i64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> Result<Comment, Rejection> {
        let raw: RawComment = serde_json::from_str(line).unwrap();
        Comment::try_from(raw)
    }

    #[test]
    fn dump_line_with_string_timestamp() {
        let c = parse(
            r#"{"id":"cnas8zv","parent_id":"t3_2qyr1a","link_id":"t3_2qyr1a","subreddit":"science",
                "author":"alice","created_utc":"1420070400","body":"hi","score":3}"#,
        )
        .unwrap();
        assert!(c.is_top_level());
        assert_eq!(c.post_id, "2qyr1a");
        assert_eq!(c.created_at, 1420070400);
    }

    #[test]
    fn reply_keeps_parent() {
        let c = parse(
            r#"{"id":"b","parent_id":"t1_a","link_id":"t3_p","subreddit":"s",
                "author":"bob","created_utc":5,"body":"","score":-1}"#,
        )
        .unwrap();
        assert_eq!(c.parent_id.as_deref(), Some("a"));
        assert!(!c.is_top_level());
    }

    #[test]
    fn missing_author_and_deleted_author() {
        let r = parse(r#"{"id":"b","link_id":"t3_p","subreddit":"s","created_utc":5,"body":"","score":1}"#);
        assert_eq!(r, Err(Rejection::Missing("author")));
        let r = parse(
            r#"{"id":"b","link_id":"t3_p","subreddit":"s","author":"[deleted]","created_utc":5,"body":"","score":1}"#,
        );
        assert_eq!(r, Err(Rejection::DeletedAuthor));
    }

    #[test]
    fn raw_round_trip() {
        let c = parse(
            r#"{"id":"b","parent_id":"t1_a","link_id":"t3_p","subreddit":"s",
                "author":"bob","created_utc":5,"body":"x","score":2}"#,
        )
        .unwrap();
        let back = Comment::try_from(RawComment::from(&c)).unwrap();
        assert_eq!(back, c);
    }
}
