//! Group comparisons and emotion profiles over per-tweet lexicon vectors.

mod mwu;
mod svg;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Label;
use crate::lexicons::Family;
use crate::topics::Theme;

pub use mwu::{mann_whitney_exact_p, mann_whitney_u, mann_whitney_u_approx, MannWhitney, EXACT_LIMIT};
pub use svg::{emotion_profile_svg, flipflop_svg};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("Mann-Whitney U needs at least one observation per sample")]
    EmptySample,
    #[error("user {user:?} has tweets in {found} theme(s); a trace needs at least 2")]
    TooFewThemes { user: String, found: usize },
    #[error("unknown emotion {0:?}")]
    UnknownEmotion(String),
}

/// An account's per-tweet theme vectors (the 48 lexicon proportions) with
/// each tweet's theme.
#[derive(Debug, Clone, PartialEq)]
pub struct UserTweets {
    pub account_id: String,
    pub label: Label,
    pub tweets: Vec<(Theme, Vec<f64>)>,
}

/// Per-category share of tweets with at least one cue, computed per theme
/// and averaged over the themes the user tweeted in. `None` when the user has
/// no themed tweets. Values are fractions in [0, 1].
pub fn cue_prevalence(user: &UserTweets, family: Family, num_themes: usize) -> Option<Vec<f64>> {
    let offset = family.offset();
    let dim = family.dim();
    let mut present = vec![vec![0usize; dim]; num_themes];
    let mut totals = vec![0usize; num_themes];
    for (theme, v) in &user.tweets {
        let Some(j) = *theme else { continue };
        totals[j] += 1;
        for (c, slot) in present[j].iter_mut().enumerate() {
            if v[offset + c] > 0.0 {
                *slot += 1;
            }
        }
    }
    let active: Vec<usize> = (0..num_themes).filter(|&j| totals[j] > 0).collect();
    if active.is_empty() {
        return None;
    }
    Some(
        (0..dim)
            .map(|c| {
                active
                    .iter()
                    .map(|&j| present[j][c] as f64 / totals[j] as f64)
                    .sum::<f64>()
                    / active.len() as f64
            })
            .collect(),
    )
}

/// Group mean of [`cue_prevalence`] as a percentage; users without themed tweets are skipped.
pub fn group_prevalence(users: &[&UserTweets], family: Family, num_themes: usize) -> Vec<f64> {
    let per_user: Vec<Vec<f64>> = users
        .iter()
        .filter_map(|u| cue_prevalence(u, family, num_themes))
        .collect();
    (0..family.dim())
        .map(|c| {
            if per_user.is_empty() {
                0.0
            } else {
                100.0 * per_user.iter().map(|v| v[c]).sum::<f64>() / per_user.len() as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stars {
    #[serde(rename = "p<=0.001")]
    Three,
    #[serde(rename = "p<=0.01")]
    Two,
    #[serde(rename = "p<=0.05")]
    One,
    #[serde(rename = "ns")]
    NotSignificant,
}

impl Stars {
    pub fn from_p(p: f64) -> Self {
        if p <= 0.001 {
            Stars::Three
        } else if p <= 0.01 {
            Stars::Two
        } else if p <= 0.05 {
            Stars::One
        } else {
            Stars::NotSignificant
        }
    }

    fn arrows(self) -> usize {
        match self {
            Stars::Three => 3,
            Stars::Two => 2,
            Stars::One => 1,
            Stars::NotSignificant => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stars::Three => "p<=0.001",
            Stars::Two => "p<=0.01",
            Stars::One => "p<=0.05",
            Stars::NotSignificant => "ns",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceRow {
    pub family: Family,
    pub category: String,
    /// Percentages in [0, 100].
    pub troll_mean: f64,
    pub regular_mean: f64,
    pub direction: Direction,
    pub stars: Stars,
    pub p_value: f64,
}

impl SignificanceRow {
    /// `X↑↑↑Y` with two decimals, or `×` when not significant.
    pub fn cell(&self) -> String {
        if self.stars == Stars::NotSignificant {
            return "×".to_owned();
        }
        let arrow = match self.direction {
            Direction::Up => "↑",
            Direction::Down => "↓",
        };
        format!(
            "{:.2}{}{:.2}",
            self.troll_mean,
            arrow.repeat(self.stars.arrows()),
            self.regular_mean
        )
    }
}

impl fmt::Display for SignificanceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}: {}", self.family, self.category, self.cell())
    }
}

/// One row per category: per-user prevalence compared across the two groups
/// with Mann–Whitney U. The statistical unit is the user.
pub fn significance_table(
    trolls: &[&UserTweets],
    regulars: &[&UserTweets],
    families: &[Family],
    num_themes: usize,
) -> Vec<SignificanceRow> {
    let collect = |users: &[&UserTweets], family: Family| -> Vec<Vec<f64>> {
        users
            .iter()
            .filter_map(|u| cue_prevalence(u, family, num_themes))
            .map(|v| v.into_iter().map(|x| 100.0 * x).collect())
            .collect()
    };
    let mut rows = Vec::new();
    for &family in families {
        let t = collect(trolls, family);
        let r = collect(regulars, family);
        for (c, category) in family.categories().iter().enumerate() {
            let a: Vec<f64> = t.iter().map(|v| v[c]).collect();
            let b: Vec<f64> = r.iter().map(|v| v[c]).collect();
            let mean = |x: &[f64]| if x.is_empty() { 0.0 } else { x.iter().sum::<f64>() / x.len() as f64 };
            let (troll_mean, regular_mean) = (mean(&a), mean(&b));
            let p_value = mann_whitney_u(&a, &b).map(|m| m.p_value).unwrap_or(1.0);
            rows.push(SignificanceRow {
                family,
                category: (*category).to_owned(),
                troll_mean,
                regular_mean,
                direction: if troll_mean > regular_mean { Direction::Up } else { Direction::Down },
                stars: Stars::from_p(p_value),
                p_value,
            });
        }
    }
    rows
}

/// Emotion mix of one theme; `shares` is `None` when no emotion cue occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThemeEmotions {
    pub theme: usize,
    pub tweet_count: usize,
    pub shares: Option<Vec<f64>>,
}

/// Mean per-tweet emotion proportions over every tweet of each theme,
/// renormalized to sum to one across the eight emotions.
pub fn theme_emotion_profile(users: &[&UserTweets], num_themes: usize) -> Vec<ThemeEmotions> {
    let offset = Family::Emotions.offset();
    let dim = Family::Emotions.dim();
    let mut sums = vec![vec![0.0; dim]; num_themes];
    let mut counts = vec![0usize; num_themes];
    for user in users {
        for (theme, v) in &user.tweets {
            let Some(j) = *theme else { continue };
            counts[j] += 1;
            for (s, x) in sums[j].iter_mut().zip(&v[offset..offset + dim]) {
                *s += x;
            }
        }
    }
    (0..num_themes)
        .map(|j| {
            let total: f64 = sums[j].iter().sum();
            ThemeEmotions {
                theme: j,
                tweet_count: counts[j],
                shares: (total > 0.0).then(|| sums[j].iter().map(|s| s / total).collect()),
            }
        })
        .collect()
}

/// Per-theme mean of two emotions for one user, over the themes the user tweeted in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipFlopPoint {
    pub theme: usize,
    pub first: f64,
    pub second: f64,
}

pub fn flipflop_trace(
    user: &UserTweets,
    emotions: (&str, &str),
    num_themes: usize,
) -> Result<Vec<FlipFlopPoint>, AnalysisError> {
    let index = |name: &str| {
        Family::Emotions
            .categories()
            .iter()
            .position(|c| *c == name)
            .map(|i| Family::Emotions.offset() + i)
            .ok_or_else(|| AnalysisError::UnknownEmotion(name.to_owned()))
    };
    let (e1, e2) = (index(emotions.0)?, index(emotions.1)?);
    let mut sums = vec![(0.0, 0.0, 0usize); num_themes];
    for (theme, v) in &user.tweets {
        if let Some(j) = *theme {
            sums[j].0 += v[e1];
            sums[j].1 += v[e2];
            sums[j].2 += 1;
        }
    }
    let points: Vec<FlipFlopPoint> = sums
        .into_iter()
        .enumerate()
        .filter(|(_, s)| s.2 > 0)
        .map(|(theme, (a, b, n))| FlipFlopPoint {
            theme,
            first: a / n as f64,
            second: b / n as f64,
        })
        .collect();
    if points.len() < 2 {
        return Err(AnalysisError::TooFewThemes {
            user: user.account_id.clone(),
            found: points.len(),
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicons::THEME_DIM;

    fn vec_with(entries: &[(Family, &str, f64)]) -> Vec<f64> {
        let mut v = vec![0.0; THEME_DIM];
        for &(fam, cat, x) in entries {
            let c = fam.categories().iter().position(|k| *k == cat).unwrap();
            v[fam.offset() + c] = x;
        }
        v
    }

    fn user(label: Label, tweets: Vec<(Theme, Vec<f64>)>) -> UserTweets {
        UserTweets {
            account_id: "u".into(),
            label,
            tweets,
        }
    }

    #[test]
    fn prevalence_extremes() {
        let care = vec_with(&[(Family::Morality, "care", 0.2)]);
        let all = user(Label::Troll, vec![(Some(0), care.clone()), (Some(1), care)]);
        assert_eq!(cue_prevalence(&all, Family::Morality, 2).unwrap()[0], 1.0);
        let none = user(Label::Troll, vec![(Some(0), vec![0.0; THEME_DIM])]);
        assert_eq!(cue_prevalence(&none, Family::Morality, 2).unwrap()[0], 0.0);
        let unthemed = user(Label::Troll, vec![(None, vec![0.0; THEME_DIM])]);
        assert_eq!(cue_prevalence(&unthemed, Family::Morality, 2), None);
    }

    #[test]
    fn prevalence_two_level_average() {
        let harm = vec_with(&[(Family::Morality, "harm", 0.1)]);
        let zero = vec![0.0; THEME_DIM];
        // User A: theme 0 has 1/2 harm tweets, theme 1 has 1/1 -> (0.5 + 1) / 2 = 0.75.
        let a = user(
            Label::Troll,
            vec![(Some(0), harm.clone()), (Some(0), zero.clone()), (Some(1), harm.clone())],
        );
        // User B: theme 2 has 1/4 -> 0.25.
        let b = user(
            Label::Troll,
            vec![(Some(2), harm), (Some(2), zero.clone()), (Some(2), zero.clone()), (Some(2), zero.clone())],
        );
        // User C: no harm -> 0.
        let c = user(Label::Troll, vec![(Some(1), zero)]);
        let harm_idx = 1;
        assert_eq!(cue_prevalence(&a, Family::Morality, 3).unwrap()[harm_idx], 0.75);
        let group = group_prevalence(&[&a, &b, &c], Family::Morality, 3);
        assert!((group[harm_idx] - 100.0 * (0.75 + 0.25 + 0.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reordering_tweets_keeps_prevalence() {
        let harm = vec_with(&[(Family::Morality, "harm", 0.1)]);
        let zero = vec![0.0; THEME_DIM];
        let mut tweets = vec![(Some(0), harm.clone()), (Some(1), zero.clone()), (Some(0), zero), (Some(1), harm)];
        let a = cue_prevalence(&user(Label::Troll, tweets.clone()), Family::Morality, 2);
        tweets.reverse();
        let b = cue_prevalence(&user(Label::Troll, tweets), Family::Morality, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn cell_rendering() {
        let row = SignificanceRow {
            family: Family::Morality,
            category: "care".into(),
            troll_mean: 1.39,
            regular_mean: 0.74,
            direction: Direction::Up,
            stars: Stars::Three,
            p_value: 1e-5,
        };
        assert_eq!(row.cell(), "1.39↑↑↑0.74");
        let ns = SignificanceRow { stars: Stars::NotSignificant, ..row };
        assert_eq!(ns.cell(), "×");
        assert_eq!(Stars::from_p(0.004), Stars::Two);
        assert_eq!(Stars::from_p(0.05), Stars::One);
    }

    #[test]
    fn direction_flips_when_groups_swap() {
        let care = vec_with(&[(Family::Morality, "care", 0.5)]);
        let zero = vec![0.0; THEME_DIM];
        let hi: Vec<UserTweets> = (0..10).map(|_| user(Label::Troll, vec![(Some(0), care.clone())])).collect();
        let lo: Vec<UserTweets> = (0..10).map(|_| user(Label::Regular, vec![(Some(0), zero.clone())])).collect();
        let hi_refs: Vec<&UserTweets> = hi.iter().collect();
        let lo_refs: Vec<&UserTweets> = lo.iter().collect();
        let ab = significance_table(&hi_refs, &lo_refs, &[Family::Morality], 1);
        let ba = significance_table(&lo_refs, &hi_refs, &[Family::Morality], 1);
        assert_eq!(ab[0].direction, Direction::Up);
        assert_eq!(ba[0].direction, Direction::Down);
        assert_eq!(ab[0].stars, Stars::Three);
        assert_eq!(ab.len(), 10);
    }

    #[test]
    fn emotion_profile_shares() {
        let fear = vec_with(&[(Family::Emotions, "fear", 0.25)]);
        let u = user(Label::Troll, vec![(Some(0), fear.clone()), (Some(0), fear)]);
        let profile = theme_emotion_profile(&[&u], 2);
        let shares = profile[0].shares.as_ref().unwrap();
        assert_eq!(shares[3], 1.0);
        assert_eq!(profile[1].shares, None);
        assert_eq!(profile[1].tweet_count, 0);
    }

    #[test]
    fn emotion_profile_hand_trace() {
        let a = vec_with(&[(Family::Emotions, "fear", 0.5), (Family::Emotions, "joy", 0.25)]);
        let b = vec_with(&[(Family::Emotions, "fear", 0.25)]);
        let u = user(Label::Troll, vec![(Some(0), a), (Some(0), b)]);
        let shares = theme_emotion_profile(&[&u], 1)[0].shares.clone().unwrap();
        // Means: fear 0.375, joy 0.125 -> shares 0.75 / 0.25.
        assert!((shares[3] - 0.75).abs() < 1e-15);
        assert!((shares[4] - 0.25).abs() < 1e-15);
        assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flipflop_crosses() {
        let fear = vec_with(&[(Family::Emotions, "fear", 0.3)]);
        let joy = vec_with(&[(Family::Emotions, "joy", 0.4)]);
        let u = user(Label::Troll, vec![(Some(1), fear), (Some(4), joy)]);
        let trace = flipflop_trace(&u, ("fear", "joy"), 7).unwrap();
        assert_eq!(trace.len(), 2);
        assert!(trace[0].first > trace[0].second);
        assert!(trace[1].first < trace[1].second);

        let same = vec_with(&[(Family::Emotions, "fear", 0.2), (Family::Emotions, "joy", 0.1)]);
        let flat = user(Label::Troll, vec![(Some(0), same.clone()), (Some(2), same.clone()), (Some(2), same)]);
        let trace = flipflop_trace(&flat, ("fear", "joy"), 3).unwrap();
        assert!(trace.iter().all(|p| p.first == 0.2 && p.second == 0.1));

        let one = user(Label::Troll, vec![(Some(0), vec![0.0; THEME_DIM])]);
        assert!(matches!(
            flipflop_trace(&one, ("fear", "joy"), 3),
            Err(AnalysisError::TooFewThemes { found: 1, .. })
        ));
        assert!(matches!(
            flipflop_trace(&u, ("fear", "hope"), 7),
            Err(AnalysisError::UnknownEmotion(_))
        ));
    }
}
