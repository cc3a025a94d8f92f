//! Parsers for the SNAP edge-list format and the Amazon product metadata
//! dump.
//!
//! The metadata format is block-oriented: blocks are separated by blank
//! lines, each starts with an `Id:` line, and field lines follow with fixed
//! prefixes. Header/footer material outside blocks (comment lines, item
//! totals) is skipped. The `cutomer:` field name is misspelled in the real
//! files and is parsed and written as-is.

use std::io::BufRead;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected two integer node ids, got {found:?}")]
    EdgeLine { line: usize, found: String },
    #[error("line {line}: malformed block header {found:?}")]
    BlockHeader { line: usize, found: String },
    #[error("block id {id}: missing ASIN")]
    MissingAsin { id: u64 },
    #[error("block id {id}: {field} declares {declared} entries but {found} follow")]
    CountMismatch {
        id: u64,
        field: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("block id {id}: unrecognized line {found:?}")]
    UnrecognizedLine { id: u64, found: String },
    #[error("block id {id}: bad field value in {found:?}")]
    BadValue { id: u64, found: String },
    #[error("block id {id}: rating {rating} outside 1..=5")]
    BadRating { id: u64, rating: u32 },
}

/// Parses a SNAP edge list: `#` comment lines, then one
/// `FromNodeId<TAB>ToNodeId` pair per line. Blank lines are tolerated.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(u64, u64)>, ParseError> {
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let pair = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => match (a.parse::<u64>(), b.parse::<u64>()) {
                (Ok(from), Ok(to)) => Some((from, to)),
                _ => None,
            },
            _ => None,
        };
        match pair {
            Some(p) => pairs.push(p),
            None => {
                return Err(ParseError::EdgeLine {
                    line: idx + 1,
                    found: trimmed.to_string(),
                })
            }
        }
    }
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Review {
    pub date: String,
    pub customer: String,
    pub rating: u8,
    pub votes: u32,
    pub helpful: u32,
}

/// One product block of the metadata file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProductRecord {
    pub id: u64,
    pub asin: String,
    pub title: Option<String>,
    pub group: Option<String>,
    pub salesrank: Option<i64>,
    /// ASINs of co-purchased products.
    pub similar: Vec<String>,
    /// Raw category paths, e.g. `|Books[283155]|Subjects[1000]|…`.
    pub categories: Vec<String>,
    pub reviews_total: u32,
    pub avg_rating: f32,
    pub reviews: Vec<Review>,
    pub discontinued: bool,
}

impl ProductRecord {
    /// Splits a raw category path on `|`, dropping empty segments.
    pub fn split_category(path: &str) -> impl Iterator<Item = &str> {
        path.split('|').filter(|s| !s.is_empty())
    }
}

/// Parses the product metadata dump into one record per `Id:` block.
pub fn parse_metadata<R: BufRead>(reader: R) -> Result<Vec<ProductRecord>, ParseError> {
    let mut records = Vec::new();
    let mut lines = reader.lines().enumerate().peekable();

    while let Some((idx, line)) = lines.next() {
        let line = line?;
        let trimmed = line.trim();
        if !trimmed.starts_with("Id:") {
            // Header/footer material between blocks.
            continue;
        }
        let id: u64 = trimmed["Id:".len()..]
            .trim()
            .parse()
            .map_err(|_| ParseError::BlockHeader {
                line: idx + 1,
                found: trimmed.to_string(),
            })?;

        // Collect the rest of the block (until a blank line or EOF).
        let mut block: Vec<String> = Vec::new();
        loop {
            let blank = match lines.peek() {
                None => break,
                Some((_, Ok(l))) => l.trim().is_empty(),
                Some((_, Err(_))) => false,
            };
            if blank {
                break;
            }
            let (_, line) = lines.next().unwrap();
            block.push(line?);
        }
        records.push(parse_block(id, &block)?);
    }
    Ok(records)
}

fn parse_block(id: u64, block: &[String]) -> Result<ProductRecord, ParseError> {
    let mut record = ProductRecord {
        id,
        ..ProductRecord::default()
    };
    let mut pos = 0usize;

    let asin_line = block.first().map(|l| l.trim()).unwrap_or("");
    match asin_line.strip_prefix("ASIN:") {
        Some(rest) => {
            record.asin = rest.trim().to_string();
            pos += 1;
        }
        None => return Err(ParseError::MissingAsin { id }),
    }
    if record.asin.is_empty() {
        return Err(ParseError::MissingAsin { id });
    }

    while pos < block.len() {
        let line = block[pos].trim();
        pos += 1;
        if line == "discontinued product" {
            record.discontinued = true;
        } else if let Some(rest) = line.strip_prefix("title:") {
            record.title = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("group:") {
            record.group = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("salesrank:") {
            let value = rest.trim().parse::<i64>().map_err(|_| ParseError::BadValue {
                id,
                found: line.to_string(),
            })?;
            record.salesrank = Some(value);
        } else if let Some(rest) = line.strip_prefix("similar:") {
            let mut tokens = rest.split_whitespace();
            let declared: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| ParseError::BadValue {
                    id,
                    found: line.to_string(),
                })?;
            record.similar = tokens.map(|t| t.to_string()).collect();
            if record.similar.len() != declared {
                return Err(ParseError::CountMismatch {
                    id,
                    field: "similar",
                    declared,
                    found: record.similar.len(),
                });
            }
        } else if let Some(rest) = line.strip_prefix("categories:") {
            let declared: usize = rest.trim().parse().map_err(|_| ParseError::BadValue {
                id,
                found: line.to_string(),
            })?;
            let available = block.len() - pos;
            if available < declared {
                return Err(ParseError::CountMismatch {
                    id,
                    field: "categories",
                    declared,
                    found: available,
                });
            }
            for _ in 0..declared {
                record.categories.push(block[pos].trim().to_string());
                pos += 1;
            }
        } else if let Some(rest) = line.strip_prefix("reviews:") {
            let (total, downloaded, avg) =
                parse_review_header(rest).ok_or_else(|| ParseError::BadValue {
                    id,
                    found: line.to_string(),
                })?;
            record.reviews_total = total;
            record.avg_rating = avg;
            let available = block.len() - pos;
            if available < downloaded as usize {
                return Err(ParseError::CountMismatch {
                    id,
                    field: "reviews",
                    declared: downloaded as usize,
                    found: available,
                });
            }
            for _ in 0..downloaded {
                let review = parse_review_line(id, block[pos].trim())?;
                record.reviews.push(review);
                pos += 1;
            }
        } else {
            return Err(ParseError::UnrecognizedLine {
                id,
                found: line.to_string(),
            });
        }
    }
    Ok(record)
}

// "total: 2  downloaded: 2  avg rating: 5"
fn parse_review_header(rest: &str) -> Option<(u32, u32, f32)> {
    let rest = rest.trim();
    let rest = rest.strip_prefix("total:")?.trim_start();
    let (total_tok, rest) = rest.split_once(char::is_whitespace)?;
    let total = total_tok.parse().ok()?;
    let rest = rest.trim_start().strip_prefix("downloaded:")?.trim_start();
    let (down_tok, rest) = rest.split_once(char::is_whitespace)?;
    let downloaded = down_tok.parse().ok()?;
    let rest = rest.trim_start().strip_prefix("avg rating:")?.trim();
    let avg = rest.parse().ok()?;
    Some((total, downloaded, avg))
}

// "2000-7-28  cutomer: A2JW67OY8U6HHK  rating: 5  votes:  10  helpful:   9"
fn parse_review_line(id: u64, line: &str) -> Result<Review, ParseError> {
    let bad = || ParseError::BadValue {
        id,
        found: line.to_string(),
    };
    let mut tokens = line.split_whitespace();
    let date = tokens.next().ok_or_else(bad)?.to_string();
    let mut customer = None;
    let mut rating = None;
    let mut votes = None;
    let mut helpful = None;
    while let Some(key) = tokens.next() {
        let value = tokens.next().ok_or_else(bad)?;
        match key {
            "cutomer:" | "customer:" => customer = Some(value.to_string()),
            "rating:" => rating = Some(value.parse::<u32>().map_err(|_| bad())?),
            "votes:" => votes = Some(value.parse::<u32>().map_err(|_| bad())?),
            "helpful:" => helpful = Some(value.parse::<u32>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    let rating = rating.ok_or_else(bad)?;
    if !(1..=5).contains(&rating) {
        return Err(ParseError::BadRating { id, rating });
    }
    Ok(Review {
        date,
        customer: customer.ok_or_else(bad)?,
        rating: rating as u8,
        votes: votes.ok_or_else(bad)?,
        helpful: helpful.ok_or_else(bad)?,
    })
}

/// Serializes records back into the metadata file layout. Used to build test
/// fixtures; `parse_metadata` round-trips its output.
pub fn format_metadata(records: &[ProductRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("Id:   {}\n", r.id));
        out.push_str(&format!("ASIN: {}\n", r.asin));
        if r.discontinued {
            out.push_str("  discontinued product\n");
        } else {
            if let Some(title) = &r.title {
                out.push_str(&format!("  title: {}\n", title));
            }
            if let Some(group) = &r.group {
                out.push_str(&format!("  group: {}\n", group));
            }
            if let Some(salesrank) = r.salesrank {
                out.push_str(&format!("  salesrank: {}\n", salesrank));
            }
            out.push_str(&format!(
                "  similar: {}{}\n",
                r.similar.len(),
                r.similar
                    .iter()
                    .map(|s| format!("  {}", s))
                    .collect::<String>()
            ));
            out.push_str(&format!("  categories: {}\n", r.categories.len()));
            for c in &r.categories {
                out.push_str(&format!("   {}\n", c));
            }
            out.push_str(&format!(
                "  reviews: total: {}  downloaded: {}  avg rating: {}\n",
                r.reviews_total,
                r.reviews.len(),
                format_rating(r.avg_rating)
            ));
            for rv in &r.reviews {
                out.push_str(&format!(
                    "    {}  cutomer: {}  rating: {}  votes: {}  helpful: {}\n",
                    rv.date, rv.customer, rv.rating, rv.votes, rv.helpful
                ));
            }
        }
        out.push('\n');
    }
    out
}

fn format_rating(r: f32) -> String {
    if (r - r.round()).abs() < f32::EPSILON {
        format!("{}", r as i64)
    } else {
        format!("{}", r)
    }
}
