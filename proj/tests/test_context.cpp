// Copyright 2026 The cubegen Authors
// SPDX-License-Identifier: Apache-2.0

#include "cubegen/context.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cubegen {
namespace {

WindowClips window_clips(const CubemapVideo& v, int s, int e, ResidencyMeter* meter = nullptr) {
    WindowClips out;
    for (Face f : kAllFaces) out[index(f)] = std::make_shared<const FaceClip>(clip_from_video(v, f, s, e, meter));
    return out;
}

CubemapVideo numbered_video(int frames, int R = 4) {
    CubemapVideo v;
    for (int t = 0; t < frames; ++t) v.emplace_back(R, 1, static_cast<float>(t), 1);
    return v;
}

std::vector<Provenance> expected(std::initializer_list<std::tuple<SourceKind, Face, int, int>> items) {
    std::vector<Provenance> out;
    for (const auto& [k, f, s, e] : items) out.push_back({k, f, s, e});
    return out;
}

TEST(Pool, FifoEviction) {
    const CubemapVideo v = numbered_video(2);
    ContextPool h2(2);
    for (int w : {1, 2, 3}) h2.push(w, window_clips(v, 0, 1));
    EXPECT_EQ(h2.windows(), (std::vector<int>{2, 3}));

    ContextPool h0(0);
    for (int w : {1, 2}) h0.push(w, window_clips(v, 0, 1));
    EXPECT_EQ(h0.size(), 0);

    ContextPool h3(3);
    for (int w = 1; w <= 5; ++w) {
        h3.push(w, window_clips(v, 0, 1));
        EXPECT_LE(h3.size(), 3);
    }
    EXPECT_EQ(h3.windows(), (std::vector<int>{3, 4, 5}));
}

TEST(Pool, RejectsOutOfOrderPush) {
    const CubemapVideo v = numbered_video(1);
    ContextPool p(2);
    p.push(2, window_clips(v, 0, 1));
    EXPECT_THROW(p.push(2, window_clips(v, 0, 1)), std::invalid_argument);
    EXPECT_THROW(p.push(1, window_clips(v, 0, 1)), std::invalid_argument);
    ContextPool empty(0);
    empty.push(3, window_clips(v, 0, 1));
    EXPECT_THROW(empty.push(1, window_clips(v, 0, 1)), std::invalid_argument);
}

TEST(Pool, EvictionReleasesResidency) {
    const CubemapVideo v = numbered_video(1);
    ResidencyMeter meter;
    ContextPool p(1);
    p.push(0, window_clips(v, 0, 1, &meter));
    p.push(1, window_clips(v, 0, 1, &meter));
    EXPECT_EQ(meter.live(), 6);
    EXPECT_EQ(meter.peak(), 12); // the incoming window exists before the push
}

TEST(ShortHorizon, Examples) {
    FrameCoverage fc(6);
    for (int t = 0; t < 6; ++t) fc.set(Face::L, t, 0.6);
    for (int tau = 0; tau + 3 <= 6; ++tau) EXPECT_NEAR(short_horizon_coverage(fc, Face::L, tau, 3), 0.6, 1e-15);

    FrameCoverage g(4);
    g.set(Face::R, 2, 1.0);
    g.set(Face::R, 3, 1.0);
    EXPECT_DOUBLE_EQ(short_horizon_coverage(g, Face::R, 2, 2), 1.0);
    EXPECT_THROW(short_horizon_coverage(g, Face::R, 3, 2), std::invalid_argument);
}

TEST(ShortHorizon, MatchesWindowedMean) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    FrameCoverage fc(20);
    for (int t = 0; t < 20; ++t) fc.set(Face::D, t, u(rng));
    for (int len = 1; len <= 5; ++len)
        for (int tau = 0; tau + len <= 20; ++tau) {
            double s = 0.0;
            for (int k = 0; k < len; ++k) s += fc.at(Face::D, tau + k);
            EXPECT_NEAR(short_horizon_coverage(fc, Face::D, tau, len), s / len, 1e-15);
        }
}

// Linear-scan oracle for the earliest qualifying start.
int scan_tau(const FrameCoverage& fc, Face g, int e_w, int len, double r, int N) {
    for (int tau = e_w; tau + len <= N; ++tau) {
        double s = 0.0;
        for (int t = tau; t < tau + len; ++t) s += fc.at(g, t);
        if (s / len >= r) return tau;
    }
    return -1;
}

TEST(Fragments, FaceCoveredFromFrameTen) {
    FrameCoverage fc(20);
    for (int t = 10; t < 20; ++t) fc.set(Face::R, t, 1.0);
    // With frames 8-9 empty, a 4-frame horizon at tau = 8 already averages
    // exactly 0.5, so r = 0.5 accepts it; tau = 10 needs r above 0.75.
    for (double r : {0.5, 0.75, 1.0}) {
        const auto frags = select_future_fragments(fc, Face::F, 8, 4, r, 20);
        ASSERT_EQ(frags.size(), 1u) << r;
        EXPECT_EQ(frags[0].face, Face::R);
        EXPECT_EQ(frags[0].start, scan_tau(fc, Face::R, 8, 4, r, 20));
        EXPECT_EQ(frags[0].length, 4);
    }
    EXPECT_EQ(select_future_fragments(fc, Face::F, 8, 4, 1.0, 20)[0].start, 10);
    EXPECT_EQ(select_future_fragments(fc, Face::F, 8, 4, 0.5, 20)[0].start, 8);
}

TEST(Fragments, EmptyWhenNothingAhead) {
    FrameCoverage fc(12);
    for (int t = 0; t < 8; ++t) fc.set(Face::F, t, 1.0);
    EXPECT_TRUE(select_future_fragments(fc, Face::F, 8, 2, 0.5, 12).empty());
}

TEST(Fragments, ThresholdDomain) {
    FrameCoverage fc(8);
    fc.set(Face::U, 4, 0.01);
    EXPECT_THROW(select_future_fragments(fc, Face::F, 4, 2, 0.0, 8), std::invalid_argument);
    EXPECT_THROW(select_future_fragments(fc, Face::F, 4, 2, 1.5, 8), std::invalid_argument);
    const auto frags = select_future_fragments(fc, Face::F, 4, 2, 1e-9, 8);
    ASSERT_EQ(frags.size(), 1u);
    EXPECT_EQ(frags[0], (FragmentSpec{Face::U, 4, 2}));
}

TEST(Fragments, CurrentFaceFirstThenCanonicalNeighbours) {
    FrameCoverage fc(8);
    for (Face f : kAllFaces)
        for (int t = 4; t < 8; ++t) fc.set(f, t, 1.0);
    const auto frags = select_future_fragments(fc, Face::U, 4, 4, 0.5, 8);
    std::vector<Face> faces;
    for (const auto& f : frags) faces.push_back(f.face);
    EXPECT_EQ(faces, (std::vector<Face>{Face::U, Face::F, Face::R, Face::B, Face::L}));
}

TEST(Fragments, OmitsTruncatedHorizon) {
    FrameCoverage fc(10);
    fc.set(Face::F, 9, 1.0);
    EXPECT_TRUE(select_future_fragments(fc, Face::F, 8, 4, 0.25, 10).empty());
    EXPECT_EQ(select_future_fragments(fc, Face::F, 8, 2, 0.5, 10).at(0).start, 8);
}

TEST(Fragments, MinimalityAgainstExhaustiveScan) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const int N = 16;
        FrameCoverage fc(N);
        for (Face f : kAllFaces)
            for (int t = 0; t < N; ++t) fc.set(f, t, u(rng) < 0.6 ? 0.0 : u(rng));
        const Face cur = kAllFaces[trial % 6];
        const int e_w = 4 * (trial % 3 + 1);
        const double r = 0.2 + 0.6 * u(rng);
        const auto frags = select_future_fragments(fc, cur, e_w, 3, r, N);
        for (const FragmentSpec& s : frags) {
            EXPECT_GE(short_horizon_coverage(fc, s.face, s.start, 3), r);
            EXPECT_EQ(s.start, scan_tau(fc, s.face, e_w, 3, r, N));
        }
    }
}

struct AssemblyFixture : ::testing::Test {
    CubemapVideo cond = numbered_video(16);
    ResidencyMeter meter;

    WindowProgress progress(int w, int s, int e, Face current, std::vector<Face> generated) {
        WindowProgress p;
        p.window = w;
        p.range = {s, e};
        p.current = current;
        p.generated = std::move(generated);
        p.canvas = window_clips(cond, s, e, &meter);
        return p;
    }
};

TEST_F(AssemblyFixture, FirstStepBoundary) {
    ContextPool pool(2);
    const std::vector<FragmentSpec> frags{{Face::F, 4, 2}};
    const ContextBundle b = assemble_context(pool, progress(0, 0, 4, Face::F, {}), frags, cond, &meter);
    EXPECT_TRUE(b.hist.empty());
    ASSERT_EQ(b.curr.size(), 6u);
    for (const auto& s : b.curr) EXPECT_EQ(s.provenance.kind, SourceKind::CurrentConditional);
    ASSERT_EQ(b.fut.size(), 1u);
    EXPECT_EQ(b.fut[0].provenance, (Provenance{SourceKind::Future, Face::F, 4, 6}));
    EXPECT_FLOAT_EQ(b.fut[0].clip->frames[1].at(0, 0, 0), 5.0f);
}

TEST_F(AssemblyFixture, HistoryFollowsPoolCapacity) {
    for (int H : {1, 2}) {
        ContextPool pool(H);
        pool.push(0, window_clips(cond, 0, 4));
        pool.push(1, window_clips(cond, 4, 8));
        const ContextBundle b = assemble_context(pool, progress(2, 8, 12, Face::F, {}), {}, cond);
        ASSERT_EQ(b.hist.size(), 6u * H);
        EXPECT_EQ(b.hist.front().provenance.start, H == 1 ? 4 : 0);
        EXPECT_EQ(b.hist.back().provenance, (Provenance{SourceKind::History, Face::D, 4, 8}));
    }
}

TEST_F(AssemblyFixture, MidWindowStructure) {
    ContextPool pool(2);
    pool.push(0, window_clips(cond, 0, 4));
    const std::vector<FragmentSpec> frags{{Face::L, 9, 3}, {Face::U, 8, 3}};
    const ContextBundle b = assemble_context(pool, progress(1, 4, 8, Face::L, {Face::R, Face::F}), frags, cond);
    using K = SourceKind;
    auto want = expected({{K::History, Face::F, 0, 4}, {K::History, Face::R, 0, 4}, {K::History, Face::B, 0, 4},
                          {K::History, Face::L, 0, 4}, {K::History, Face::U, 0, 4}, {K::History, Face::D, 0, 4},
                          {K::CurrentGenerated, Face::R, 4, 8}, {K::CurrentGenerated, Face::F, 4, 8},
                          {K::CurrentConditional, Face::L, 4, 8}, {K::CurrentConditional, Face::B, 4, 8},
                          {K::CurrentConditional, Face::U, 4, 8}, {K::CurrentConditional, Face::D, 4, 8},
                          {K::Future, Face::L, 9, 12}, {K::Future, Face::U, 8, 11}});
    EXPECT_EQ(b.provenance(), want);
    EXPECT_EQ(b.curr.size(), 6u);
    const auto j = b.provenance_json();
    EXPECT_EQ(j[6].dump(), R"({"e":8,"face":"R","kind":"curr-gen","s":4})");
    EXPECT_EQ(j[13].at("kind"), "fut");
}

TEST_F(AssemblyFixture, CurrentSourceCountIsConstant) {
    ContextPool pool(1);
    std::vector<Face> done;
    for (Face f : kAllFaces) {
        const ContextBundle b = assemble_context(pool, progress(0, 0, 4, f, done), {}, cond);
        EXPECT_EQ(b.curr.size(), 6u);
        EXPECT_EQ(b.curr[done.size()].provenance.face, f);
        done.push_back(f);
    }
}

TEST_F(AssemblyFixture, MissingContentIsAnError) {
    ContextPool pool(1);
    const std::vector<FragmentSpec> past_end{{Face::F, 14, 4}};
    EXPECT_THROW(assemble_context(pool, progress(0, 0, 4, Face::F, {}), past_end, cond), std::logic_error);
    WindowProgress p = progress(0, 0, 4, Face::R, {});
    p.canvas[index(Face::B)].reset();
    EXPECT_THROW(assemble_context(pool, p, {}, cond), std::logic_error);
}

TEST_F(AssemblyFixture, DeterministicOrder) {
    ContextPool pool(2);
    pool.push(0, window_clips(cond, 0, 4));
    const std::vector<FragmentSpec> frags{{Face::D, 8, 2}};
    const auto a = assemble_context(pool, progress(1, 4, 8, Face::D, {Face::U}), frags, cond).provenance_json();
    const auto b = assemble_context(pool, progress(1, 4, 8, Face::D, {Face::U}), frags, cond).provenance_json();
    EXPECT_EQ(a.dump(), b.dump());
}

} // namespace
} // namespace cubegen
