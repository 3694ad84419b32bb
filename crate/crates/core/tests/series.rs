use chrono::{Datelike, Duration, NaiveDate, Weekday};
use proptest::prelude::*;

use ardl_core::series::{
    align_panel, apply_transform, read_series_csv, write_series_csv, AlignOptions, DateRange,
    Frequency, TimeSeries, Transform,
};

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 2, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn csv_round_trip_then_level_alignment_is_identity(
        a in prop::collection::vec(-1e6f64..1e6, 5..60),
        offset in 0usize..5,
    ) {
        let dir = tempfile::tempdir().unwrap();
        let s = TimeSeries::daily_from("a", start() + Duration::days(offset as i64), a.clone()).unwrap();
        let path = dir.path().join("a.csv");
        write_series_csv(&path, &s).unwrap();
        let back = read_series_csv(&path, "a", Frequency::Daily).unwrap();
        prop_assert_eq!(back.values(), s.values());
        prop_assert_eq!(back.dates(), s.dates());

        let panel = align_panel(&[back], DateRange::unbounded(), AlignOptions::default()).unwrap();
        let col = panel.column("a").unwrap();
        prop_assert_eq!(apply_transform(col, Transform::Level).unwrap(), a);
    }

    #[test]
    fn weekday_series_fills_weekends_from_friday(v in prop::collection::vec(1.0f64..100.0, 10..40)) {
        let mut dates = Vec::new();
        let mut d = start();
        while dates.len() < v.len() {
            if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
                dates.push(d);
            }
            d += Duration::days(1);
        }
        let macro_series = TimeSeries::new("m", dates.clone(), v.clone(), Frequency::Daily).unwrap();
        let days = (*dates.last().unwrap() - start()).num_days() as usize + 1;
        let daily = TimeSeries::daily_from("d", start(), vec![1.0; days]).unwrap();
        let panel = align_panel(&[daily, macro_series], DateRange::unbounded(), AlignOptions::default()).unwrap();
        prop_assert_eq!(panel.dates().len(), days);
        let m = panel.column("m").unwrap();
        for (i, date) in panel.dates().iter().enumerate() {
            match dates.iter().position(|x| x == date) {
                Some(j) => prop_assert_eq!(m[i], v[j]),
                None => prop_assert_eq!(m[i], m[i - 1]),
            }
        }
    }

    #[test]
    fn log_then_difference_is_log_return(v in prop::collection::vec(0.01f64..1e4, 2..50)) {
        let logged = apply_transform(&v, Transform::Log).unwrap();
        let returns = apply_transform(&logged, Transform::FirstDifference).unwrap();
        prop_assert_eq!(returns.len(), v.len() - 1);
        for (i, r) in returns.iter().enumerate() {
            prop_assert!((r - (v[i + 1] / v[i]).ln()).abs() < 1e-9);
        }
    }
}
