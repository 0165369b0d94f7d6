use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A UTC calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthKey {
    pub year: i32,
    pub month: u8,
}

impl MonthKey {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Config(format!("month {month} outside 1..=12")));
        }
        Ok(MonthKey { year, month })
    }

    /// Months since year 0, used for arithmetic and ordering.
    pub fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn from_ordinal(ord: i64) -> Self {
        MonthKey {
            year: ord.div_euclid(12) as i32,
            month: (ord.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn succ(self) -> Self {
        Self::from_ordinal(self.ordinal() + 1)
    }

    pub fn pred(self) -> Self {
        Self::from_ordinal(self.ordinal() - 1)
    }

    pub fn plus(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }

    /// Signed number of months from `self` to `later`.
    pub fn months_until(self, later: MonthKey) -> i64 {
        later.ordinal() - self.ordinal()
    }

    /// Unix seconds of the first instant of the month.
    pub fn start_timestamp(self) -> i64 {
        NaiveDate::from_ymd_opt(self.year, self.month as u32, 1)
            .expect("valid month")
            .and_hms_opt(0, 0, 0)
            .expect("midnight")
            .and_utc()
            .timestamp()
    }

    /// Unix seconds of the first instant of the following month.
    pub fn end_timestamp(self) -> i64 {
        self.succ().start_timestamp()
    }
}

/// Calendar month (UTC) containing the timestamp.
pub fn month_of(created_at: i64) -> Result<MonthKey> {
    if created_at <= 0 {
        return Err(Error::InvalidTimestamp(created_at));
    }
    let dt = DateTime::from_timestamp(created_at, 0).ok_or(Error::InvalidTimestamp(created_at))?;
    Ok(MonthKey {
        year: dt.year(),
        month: dt.month() as u8,
    })
}

impl fmt::Display for MonthKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("expected YYYY-MM, got `{s}`"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        MonthKey::new(year, month)
    }
}

impl Serialize for MonthKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MonthKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthRange {
    pub start: MonthKey,
    pub end: MonthKey,
}

impl MonthRange {
    pub fn new(start: MonthKey, end: MonthKey) -> Result<Self> {
        if end < start {
            return Err(Error::Config(format!("month range {start}..{end} is empty")));
        }
        Ok(MonthRange { start, end })
    }

    pub fn contains(&self, m: MonthKey) -> bool {
        self.start <= m && m <= self.end
    }

    pub fn len(&self) -> usize {
        (self.start.months_until(self.end) + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = MonthKey> {
        let start = self.start.ordinal();
        (start..=self.end.ordinal()).map(MonthKey::from_ordinal)
    }
}
