use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use lzvernam::{decode, encode, CodecParams, GeneratorKind, Key};
use lzvernam_bench::{inputs, SIZES};

fn bench_encode(c: &mut Criterion) {
    let key = Key::new(b"bench key".to_vec()).unwrap();
    let mut group = c.benchmark_group("encode");
    for &size in SIZES {
        group.throughput(Throughput::Bytes(size as u64));
        for (label, data) in inputs(size) {
            for generator in [GeneratorKind::Zero, GeneratorKind::Lfsr32, GeneratorKind::Rc4] {
                let params = CodecParams {
                    generator,
                    ..CodecParams::default()
                };
                let id = BenchmarkId::new(format!("{label}/{generator:?}"), size);
                group.bench_with_input(id, &data, |b, data| {
                    b.iter(|| encode(data, &key, &params).unwrap())
                });
            }
        }
    }
    group.finish();
}

fn bench_decode(c: &mut Criterion) {
    let key = Key::new(b"bench key".to_vec()).unwrap();
    let mut group = c.benchmark_group("decode");
    for &size in SIZES {
        group.throughput(Throughput::Bytes(size as u64));
        for (label, data) in inputs(size) {
            let container = encode(&data, &key, &CodecParams::default()).unwrap();
            group.bench_with_input(BenchmarkId::new(label, size), &container, |b, c| {
                b.iter(|| decode(c, &key).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_encode, bench_decode
);
criterion_main!(benches);
