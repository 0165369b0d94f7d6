//! Corpus ingestion: dump records, the indexed store, monthly user profiles.

mod month;
mod profile;
mod record;
mod store;

pub use month::{month_of, MonthKey, MonthRange};
pub use profile::{build_profiles, Profiles, UserMonthProfile};
pub use record::{Comment, Post, RawComment, RawPost, Rejection, DELETED_AUTHOR};
pub use store::{CorpusStore, IngestOptions, IngestStats};

/// Small constructors for hand-written fixtures.
#[doc(hidden)]
pub mod testkit {
    use super::*;

    pub fn comment(id: &str, community: &str, author: &str, t: i64) -> Comment {
        Comment {
            id: id.to_string(),
            parent_id: None,
            post_id: format!("post_{community}"),
            community: community.to_string(),
            author: author.to_string(),
            created_at: t,
            body: String::new(),
            score: 1,
        }
    }

    pub fn reply(id: &str, parent: &str, community: &str, author: &str, t: i64) -> Comment {
        Comment {
            parent_id: Some(parent.to_string()),
            ..comment(id, community, author, t)
        }
    }

    pub fn on_post(mut c: Comment, post: &str) -> Comment {
        c.post_id = post.to_string();
        c
    }

    pub fn post(id: &str, community: &str, t: i64, title: &str, score: i64) -> Post {
        Post {
            id: id.to_string(),
            community: community.to_string(),
            author: "op".to_string(),
            created_at: t,
            title: title.to_string(),
            body: None,
            score,
            num_comments: 0,
        }
    }

    pub fn store_of(comments: Vec<Comment>, posts: Vec<Post>) -> CorpusStore {
        CorpusStore::from_parts(comments, posts, &IngestOptions::default())
    }
}
