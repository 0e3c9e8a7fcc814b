use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use lzvernam::corpus::random_bytes;
use lzvernam::{chi_square_uniform, fips_battery, histogram, Generator, GeneratorKind, Key, Keystream};

fn bench_keystream(c: &mut Criterion) {
    let key = Key::new(b"bench key".to_vec()).unwrap();
    let mut group = c.benchmark_group("keystream");
    group.throughput(Throughput::Bytes(12 * 1024 / 8));
    for kind in [GeneratorKind::Lfsr32, GeneratorKind::Rc4] {
        group.bench_function(format!("{kind:?}/1024x12bit"), |b| {
            let mut g = Generator::new(kind, &key).unwrap();
            b.iter(|| {
                let mut acc = 0u32;
                for _ in 0..1024 {
                    acc ^= g.next_bits(12);
                }
                black_box(acc)
            })
        });
    }
    group.finish();
}

fn bench_stats(c: &mut Criterion) {
    let data = random_bytes(1 << 20, 3);
    let mut group = c.benchmark_group("stats");
    group.throughput(Throughput::Bytes(data.len() as u64));
    group.bench_function("histogram+chi2/1MiB", |b| {
        b.iter(|| chi_square_uniform(&histogram(&data)).unwrap())
    });
    group.finish();
    c.bench_function("fips_battery", |b| b.iter(|| fips_battery(&data).unwrap()));
}

criterion_group!(benches, bench_keystream, bench_stats);
criterion_main!(benches);
