//! Synthetic data set with the shape of a 2013-2016 virtual currency panel:
//! prices of BitCoin, sixteen altcoins and two altcoin indices, coin supply,
//! Wikipedia views and six macro-financial series.
//!
//! Roughly half of the prices error-correct towards a combination of the gold
//! price and the NASDAQ index; the others are independent random walks.
//! Every series draws from its own stream so adding a series never changes
//! the others. Values are rounded to six decimals.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{Datelike, Days, NaiveDate, Weekday};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::mc::replication_rng;
use crate::series::{write_series_csv, Frequency, TimeSeries, Transform};

pub const PAPER_SHAPE_SEED: u64 = 2017;

/// One priced currency of the panel.
#[derive(Debug, Clone, Copy)]
pub struct Currency {
    /// Column label in the reports.
    pub label: &'static str,
    /// Series stem: prices are `<stem>_usd`, supply `supply_<stem>`, views `wiki_<stem>`.
    pub stem: &'static str,
    pub first_price: (i32, u32, u32),
    pub has_wiki: bool,
    pub cointegrated: bool,
}

const fn coin(
    label: &'static str,
    stem: &'static str,
    first_price: (i32, u32, u32),
    has_wiki: bool,
    cointegrated: bool,
) -> Currency {
    Currency {
        label,
        stem,
        first_price,
        has_wiki,
        cointegrated,
    }
}

pub const ALTCOINS: [Currency; 16] = [
    coin("ETH", "ethereum", (2015, 8, 30), true, true),
    coin("XRP", "ripple", (2014, 1, 4), true, false),
    coin("LTC", "litecoin", (2013, 12, 1), true, true),
    coin("XMR", "monero", (2015, 3, 10), true, false),
    coin("DASH", "dash", (2015, 3, 25), true, true),
    coin("NEM", "nem", (2015, 4, 13), true, false),
    coin("DOGE", "dogecoin", (2014, 3, 22), true, false),
    coin("PPC", "peercoin", (2014, 4, 1), true, true),
    coin("NMC", "namecoin", (2014, 4, 1), true, true),
    coin("NVC", "novacoin", (2014, 4, 1), false, false),
    coin("NXT", "nxt", (2014, 4, 14), false, true),
    coin("XCP", "counterparty", (2014, 4, 14), false, true),
    coin("MINT", "mintcoin", (2014, 4, 14), false, false),
    coin("QORA", "qora", (2014, 6, 27), false, false),
    coin("UNITY", "supernet", (2014, 9, 24), false, true),
    coin("BTS", "bitshares", (2014, 11, 13), false, false),
];

const START: (i32, u32, u32) = (2013, 12, 1);
const END: (i32, u32, u32) = (2016, 10, 12);
const RIPPLE_END: (i32, u32, u32) = (2016, 7, 19);
const ADJUSTMENT: f64 = 0.15;

fn ymd((y, m, d): (i32, u32, u32)) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid calendar date")
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn is_weekday(d: NaiveDate) -> bool {
    !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)
}

/// A generated series together with its default manifest transform.
#[derive(Debug, Clone)]
pub struct SyntheticSeries {
    pub series: TimeSeries,
    pub transform: Transform,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sampling {
    Daily,
    Weekdays,
    Weekly,
}

struct Builder {
    seed: u64,
    stream: u64,
    calendar: Vec<NaiveDate>,
    out: Vec<SyntheticSeries>,
}

impl Builder {
    fn rng(&mut self) -> ChaCha20Rng {
        self.stream += 1;
        replication_rng(self.seed, self.stream)
    }

    /// Log random walk that only moves on weekdays.
    fn market_walk(&mut self, start: f64, drift: f64, sd: f64) -> Vec<f64> {
        let mut rng = self.rng();
        let mut level = start.ln();
        self.calendar
            .iter()
            .map(|d| {
                if is_weekday(*d) {
                    let e: f64 = rng.sample(StandardNormal);
                    level += drift + sd * e;
                }
                level
            })
            .collect()
    }

    fn push(
        &mut self,
        name: &str,
        from: NaiveDate,
        to: NaiveDate,
        sampling: Sampling,
        transform: Transform,
        values: impl Fn(usize) -> f64,
    ) -> Result<()> {
        let mut dates = Vec::new();
        let mut out = Vec::new();
        let mut next_weekly = from;
        for (i, d) in self.calendar.iter().enumerate() {
            if *d < from || *d > to {
                continue;
            }
            let keep = match sampling {
                Sampling::Daily => true,
                Sampling::Weekdays => is_weekday(*d),
                Sampling::Weekly => *d == next_weekly,
            };
            if !keep {
                continue;
            }
            if sampling == Sampling::Weekly {
                next_weekly = d.checked_add_days(Days::new(7)).expect("in range");
            }
            dates.push(*d);
            out.push(round6(values(i)));
        }
        let frequency = match sampling {
            Sampling::Weekly => Frequency::Weekly,
            _ => Frequency::Daily,
        };
        let series = TimeSeries::new(name, dates, out, frequency)?;
        self.out.push(SyntheticSeries { series, transform });
        Ok(())
    }

    /// Log price that error-corrects towards `anchor` when given, else a
    /// random walk.
    fn price(&mut self, start: f64, sd: f64, anchor: Option<&[f64]>) -> Vec<f64> {
        let mut rng = self.rng();
        let n = self.calendar.len();
        let mut p = vec![start.ln(); n];
        let offset = anchor.map_or(0.0, |a| start.ln() - a[0]);
        for t in 1..n {
            let e: f64 = rng.sample(StandardNormal);
            let pull = anchor.map_or(0.0, |a| -ADJUSTMENT * (p[t - 1] - offset - a[t - 1]));
            p[t] = p[t - 1] + pull + sd * e;
        }
        p
    }

    /// Log page views around a stable mean.
    fn views(&mut self, mean: f64) -> Vec<f64> {
        let mut rng = self.rng();
        let mut dev = 0.0;
        self.calendar
            .iter()
            .map(|_| {
                let e: f64 = rng.sample(StandardNormal);
                dev = 0.8 * dev + 0.25 * e;
                (mean.ln() + dev).exp().round().max(1.0)
            })
            .collect()
    }

    /// Steadily growing log supply.
    fn supply(&mut self, start: f64, daily_growth: f64) -> Vec<f64> {
        let mut rng = self.rng();
        let mut level = start.ln();
        self.calendar
            .iter()
            .map(|_| {
                let e: f64 = rng.sample(StandardNormal);
                level += daily_growth * (1.0 + 0.3 * e).max(0.0);
                level.exp().round()
            })
            .collect()
    }
}

/// Generates every series of the synthetic panel.
pub fn paper_shape_series(seed: u64) -> Result<Vec<SyntheticSeries>> {
    let start = ymd(START);
    let end = ymd(END);
    let calendar: Vec<NaiveDate> = start.iter_days().take_while(|d| *d <= end).collect();
    let mut b = Builder {
        seed,
        stream: 0,
        calendar,
        out: Vec::new(),
    };

    let macros: [(&str, f64, f64, f64, Transform); 6] = [
        ("gold_price", 1230.0, 0.0, 0.009, Transform::Log),
        ("nasdaq", 4050.0, 0.0003, 0.011, Transform::Log),
        ("treasury_rate10y", 2.8, -0.0004, 0.018, Transform::Level),
        ("e_usd_eur", 1.36, -0.0002, 0.005, Transform::Log),
        ("e_yuan_usd", 6.07, 0.0001, 0.002, Transform::Log),
        ("oil_price", 111.0, -0.0012, 0.02, Transform::Log),
    ];
    let mut anchor = vec![0.0; b.calendar.len()];
    for (name, level, drift, sd, transform) in macros {
        let path = b.market_walk(level, drift, sd);
        match name {
            "gold_price" => anchor
                .iter_mut()
                .zip(&path)
                .for_each(|(a, g)| *a += 0.8 * g),
            "nasdaq" => anchor
                .iter_mut()
                .zip(&path)
                .for_each(|(a, n)| *a += 0.5 * n),
            _ => {}
        }
        b.push(name, start, end, Sampling::Weekdays, transform, |i| {
            path[i].exp()
        })?;
    }

    let btc = b.price(800.0, 0.03, Some(&anchor));
    b.push(
        "bitcoin_usd",
        start,
        end,
        Sampling::Daily,
        Transform::Log,
        |i| btc[i].exp(),
    )?;
    let supply = b.supply(12.1e6, 0.00035);
    b.push(
        "supply_bitcoin",
        start,
        end,
        Sampling::Daily,
        Transform::Log,
        |i| supply[i],
    )?;
    let views = b.views(18000.0);
    b.push(
        "wiki_bitcoin",
        start,
        end,
        Sampling::Daily,
        Transform::Log,
        |i| views[i],
    )?;

    let mut total_supply = vec![0.0; b.calendar.len()];
    let mut total_views = vec![0.0; b.calendar.len()];
    for (k, c) in ALTCOINS.iter().enumerate() {
        let first = ymd(c.first_price).max(start);
        let last = if c.stem == "ripple" {
            ymd(RIPPLE_END)
        } else {
            end
        };
        let level = 0.05 * 2f64.powi(k as i32 % 7) + 0.002;
        let path = b.price(level, 0.05, c.cointegrated.then_some(anchor.as_slice()));
        let name = format!("{}_usd", c.stem);
        b.push(&name, first, last, Sampling::Daily, Transform::Log, |i| {
            path[i].exp()
        })?;

        let supply = b.supply(1e6 * (k as f64 + 2.0), 0.0006 + 0.0001 * (k % 4) as f64);
        total_supply
            .iter_mut()
            .zip(&supply)
            .for_each(|(t, s)| *t += s);
        let name = format!("supply_{}", c.stem);
        let weekly_from = first.max(ymd((2013, 12, 8)));
        b.push(
            &name,
            weekly_from,
            end,
            Sampling::Weekly,
            Transform::Log,
            |i| supply[i],
        )?;

        if c.has_wiki {
            let views = b.views(400.0 * (k as f64 + 1.0));
            total_views
                .iter_mut()
                .zip(&views)
                .for_each(|(t, v)| *t += v);
            let name = format!("wiki_{}", c.stem);
            b.push(&name, start, end, Sampling::Daily, Transform::Log, |i| {
                views[i]
            })?;
        }
    }
    b.push(
        "supply_altcoins",
        ymd((2014, 2, 23)),
        end,
        Sampling::Weekly,
        Transform::Log,
        |i| total_supply[i],
    )?;
    b.push(
        "wiki_altcoins",
        start,
        end,
        Sampling::Daily,
        Transform::Log,
        |i| total_views[i],
    )?;

    let alt19 = b.price(100.0, 0.025, None);
    b.push(
        "alt19",
        ymd((2013, 12, 13)),
        end,
        Sampling::Daily,
        Transform::Log,
        |i| alt19[i].exp(),
    )?;
    let alt100 = b.price(1000.0, 0.03, Some(&anchor));
    b.push(
        "alt100usd",
        ymd((2014, 1, 7)),
        end,
        Sampling::Daily,
        Transform::Log,
        |i| alt100[i].exp(),
    )?;

    Ok(b.out)
}

/// Writes `data/<name>.csv` for every series plus `manifest.csv` into `dir`
/// and returns the manifest path.
pub fn write_paper_shape_dataset(dir: &Path, seed: u64) -> Result<PathBuf> {
    let data = dir.join("data");
    std::fs::create_dir_all(&data)?;
    let mut manifest = String::from("name,path,frequency,transform\n");
    for s in paper_shape_series(seed)? {
        let name = s.series.name();
        write_series_csv(&data.join(format!("{name}.csv")), &s.series)?;
        let freq = match s.series.frequency() {
            Frequency::Daily => "daily",
            Frequency::Weekly => "weekly",
        };
        writeln!(manifest, "{name},data/{name}.csv,{freq},{}", s.transform).expect("string write");
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest)?;
    Ok(path)
}

const MACROS: [&str; 6] = [
    "gold_price",
    "nasdaq",
    "treasury_rate10y",
    "e_usd_eur",
    "e_yuan_usd",
    "oil_price",
];

struct Template {
    id: &'static str,
    price: &'static str,
    supply_bitcoin: bool,
    supply_own: bool,
    supply_altcoins: bool,
    wiki_bitcoin: bool,
    wiki_own: bool,
    wiki_altcoins: bool,
}

const fn template(id: &'static str, price: &'static str, flags: [bool; 6]) -> Template {
    Template {
        id,
        price,
        supply_bitcoin: flags[0],
        supply_own: flags[1],
        supply_altcoins: flags[2],
        wiki_bitcoin: flags[3],
        wiki_own: flags[4],
        wiki_altcoins: flags[5],
    }
}

const BITCOIN_MODELS: [Template; 4] = [
    template("1.1", "alt100usd", [true, false, true, true, false, true]),
    template("1.2", "alt19", [true, false, true, true, false, true]),
    template("1.3", "alt100usd", [true, false, true, false, false, true]),
    template("1.4", "alt19", [false, false, true, false, false, true]),
];

const ALTCOIN_MODELS: [Template; 4] = [
    template("2.1", "bitcoin_usd", [true, true, false, true, true, false]),
    template(
        "2.2",
        "bitcoin_usd",
        [true, false, false, true, false, false],
    ),
    template("2.3", "alt19", [false, false, true, false, false, true]),
    template("2.4", "alt19", [false, true, true, false, true, true]),
];

fn quoted(names: &[String]) -> String {
    let inner: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
    format!("[{}]", inner.join(", "))
}

/// Run configuration with the four BitCoin and four altcoin model templates
/// for all nineteen dependents. The index `alt19` cannot explain itself, so
/// its M2.3 and M2.4 models use `alt100usd` instead.
pub fn paper_shape_config() -> String {
    let mut out = String::from(
        "# Synthetic reproduction of the model grid: four templates per currency.\n\
         [settings]\n\
         unit_root_test = \"adf\"\n\
         unit_root_case = \"constant\"\n\
         max_lags = 8\n\
         lag_selection = \"aic\"\n\
         level = 5\n\
         bounds_level = 5\n\
         fill = \"forward_fill\"\n",
    );
    let mut dependents: Vec<(&str, String, Option<Currency>)> =
        vec![("BTC", "bitcoin_usd".into(), None)];
    dependents.extend(
        ALTCOINS
            .iter()
            .map(|c| (c.label, format!("{}_usd", c.stem), Some(*c))),
    );
    dependents.push(("alt19", "alt19".into(), None));
    dependents.push(("alt100usd", "alt100usd".into(), None));

    for (label, dependent, own) in &dependents {
        let templates = if dependent == "bitcoin_usd" {
            &BITCOIN_MODELS
        } else {
            &ALTCOIN_MODELS
        };
        for t in templates {
            let price = if t.price == dependent {
                "alt100usd"
            } else {
                t.price
            };
            let mut dynamic = vec![price.to_string()];
            let mut exogenous = Vec::new();
            if t.supply_bitcoin {
                exogenous.push("supply_bitcoin".to_string());
            }
            if let Some(c) = own.filter(|_| t.supply_own) {
                exogenous.push(format!("supply_{}", c.stem));
            }
            if t.supply_altcoins {
                exogenous.push("supply_altcoins".to_string());
            }
            if t.wiki_bitcoin {
                dynamic.push("wiki_bitcoin".into());
            }
            if let Some(c) = own.filter(|c| t.wiki_own && c.has_wiki) {
                dynamic.push(format!("wiki_{}", c.stem));
            }
            if t.wiki_altcoins {
                dynamic.push("wiki_altcoins".into());
            }
            dynamic.extend(MACROS.iter().map(|m| m.to_string()));
            let family = &t.id[..1];
            write!(
                out,
                "\n[[model]]\n\
                 id = \"M{id}-{label}\"\n\
                 table = \"Model {family}.{n}\"\n\
                 column = \"{label}\"\n\
                 dependent = \"{dependent}\"\n\
                 dynamic_regressors = {dynamic}\n\
                 exogenous = {exogenous}\n\
                 case = \"constant\"\n\
                 p_max = 2\n\
                 q_max = 2\n\
                 criterion = \"bic\"\n\
                 dummy_policy = {{ kind = \"auto_za\", model = \"intercept\", trim = 0.15 }}\n",
                id = t.id,
                n = &t.id[2..],
                dynamic = quoted(&dynamic),
                exogenous = quoted(&exogenous),
            )
            .expect("string write");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{parse_config, parse_manifest, validate_against};

    #[test]
    fn config_resolves_against_generated_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let manifest_path = write_paper_shape_dataset(dir.path(), 3).unwrap();
        let text = std::fs::read_to_string(&manifest_path).unwrap();
        let manifest = parse_manifest(&text, "manifest.csv", dir.path()).unwrap();
        let config = parse_config(&paper_shape_config(), "config.toml").unwrap();
        assert_eq!(config.models.len(), 76);
        validate_against(&config, &manifest).unwrap();
        for m in &config.models {
            assert!(m.dynamic_regressors.len() <= 10, "{}", m.id);
            assert!(
                !m.variables()[1..].contains(&m.dependent.as_str()),
                "{}",
                m.id
            );
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a = paper_shape_series(5).unwrap();
        let b = paper_shape_series(5).unwrap();
        let c = paper_shape_series(6).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.series, y.series);
        }
        assert_ne!(a[0].series.values(), c[0].series.values());
    }

    #[test]
    fn macros_skip_weekends_and_supply_is_weekly() {
        let all = paper_shape_series(1).unwrap();
        let gold = &all
            .iter()
            .find(|s| s.series.name() == "gold_price")
            .unwrap()
            .series;
        assert!(gold.dates().iter().all(|d| is_weekday(*d)));
        let supply = &all
            .iter()
            .find(|s| s.series.name() == "supply_ethereum")
            .unwrap()
            .series;
        assert!(supply
            .dates()
            .windows(2)
            .all(|w| (w[1] - w[0]).num_days() == 7));
    }
}
