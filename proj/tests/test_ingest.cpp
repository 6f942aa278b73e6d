#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "support/oracles.hpp"
#include "vitalband/errors.hpp"
#include "vitalband/ingest.hpp"
#include "vitalband/synth.hpp"

using namespace vitalband;

namespace {

ParseResult parse_text(const std::string& text, SampleFormat fmt = SampleFormat::long_form) {
    std::istringstream in(text);
    return parse_samples_csv(in, fmt);
}

} // namespace

TEST_CASE("long rows map directly onto samples") {
    const ParseResult r = parse_text("timestamp,signal,value,quality\n1583020800,HR,72,95\n");
    REQUIRE(r.samples.size() == 1);
    CHECK(r.diagnostics.empty());
    const VitalSample& s = r.samples[0];
    CHECK(s.timestamp == 1583020800);
    CHECK(s.signal == SignalId(SignalId::Core::HR));
    CHECK(s.value == 72.0);
    CHECK(s.quality == 95);
}

TEST_CASE("non-finite values are rejected with a line diagnostic") {
    const ParseResult r = parse_text(
        "timestamp,signal,value,quality\n1583020800,HR,NaN,95\n1583020801,HR,72,\n");
    CHECK(r.samples.size() == 1);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].line == 2);
    CHECK(r.diagnostics[0].message == "non-finite value");
    CHECK(r.samples[0].quality == kNoQuality);
}

TEST_CASE("quality bounds and field counts are enforced per row") {
    const ParseResult r = parse_text("timestamp,signal,value,quality\n"
                                     "1,HR,70,101\n"
                                     "2,HR,70,-1\n"
                                     "3,HR,70,100\n"
                                     "4,HR,70,0\n"
                                     "5,HR,70,\n"
                                     "6,HR\n");
    CHECK(r.samples.size() == 3);
    CHECK(r.diagnostics.size() == 3);
}

TEST_CASE("a one-day 1 Hz trace parses without diagnostics") {
    PatientProfile profile;
    profile.patient_id = "day";
    profile.seed = 11;
    profile.duration_days = 1.0 + 2.0 / 24.0; // one aligned recording day plus margin
    profile.admission_start = 1583020800;     // midnight, already hour-aligned
    profile.gap_duration_hours = 0;
    profile.dropout_rate = 0;
    const SyntheticPatient patient = generate_patient(profile);
    const auto* hr = patient.record.find(SignalId(SignalId::Core::HR));
    REQUIRE(hr != nullptr);

    std::vector<VitalSample> rows;
    for (std::size_t i = 0; i < 86400; ++i)
        rows.push_back(VitalSample{(*hr)[i].timestamp, SignalId(SignalId::Core::HR),
                                   (*hr)[i].value, (*hr)[i].quality});
    const ParseResult r = parse_text(serialize_samples_csv(rows));
    CHECK(r.samples.size() == 86400);
    CHECK(r.diagnostics.empty());
}

TEST_CASE("mostly malformed input is a fatal format error") {
    CHECK_THROWS_AS(parse_text("timestamp,signal,value,quality\nx\ny\n1,HR,70,90\n"),
                    FormatError);
    CHECK_THROWS_AS(parse_text("unexpected,header\n1,HR,70,90\n"), FormatError);
    CHECK_THROWS_AS(parse_text(""), FormatError);
}

TEST_CASE("exactly half malformed is tolerated") {
    const ParseResult r = parse_text("timestamp,signal,value,quality\nbad\n1,HR,70,90\n");
    CHECK(r.samples.size() == 1);
    CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("wide format converts per-second rows") {
    const ParseResult r = parse_text(
        "timestamp,HR,HR_quality,Temp\n"
        "1583020800,72,95,36.8\n"
        "1583020801,,,36.9\n"
        "1583020802,70,88,\n",
        SampleFormat::wide_form);
    REQUIRE(r.samples.size() == 4);
    CHECK(r.samples[0].signal == SignalId(SignalId::Core::HR));
    CHECK(r.samples[0].quality == 95);
    CHECK(r.samples[1].signal == SignalId(SignalId::Core::TEMP));
    CHECK(r.samples[1].quality == kNoQuality);
    CHECK(r.samples[2].timestamp == 1583020801);
    CHECK(r.samples[2].value == 36.9);
    CHECK(r.samples[3].value == 70.0);
}

TEST_CASE("unknown channels are preserved as non-core signals") {
    const ParseResult r = parse_text("timestamp,signal,value,quality\n1,GSR,0.7,\n");
    REQUIRE(r.samples.size() == 1);
    CHECK(!r.samples[0].signal.is_core());
    CHECK(r.samples[0].signal.name() == "GSR");
    CHECK(SignalId::parse("temp") == SignalId(SignalId::Core::TEMP));
    CHECK(SignalId::parse("spo2") == SignalId(SignalId::Core::SPO2));
}

TEST_CASE("duplicate seconds resolve to the last occurrence") {
    PatientMeta meta;
    meta.patient_id = "dup";
    meta.admission_end = 10;
    std::vector<VitalSample> samples = {
        {5, SignalId(SignalId::Core::HR), 70.0, 90},
        {5, SignalId(SignalId::Core::HR), 80.0, 91},
    };
    const BuildResult built = build_record(meta, samples);
    const auto* hr = built.record.find(SignalId(SignalId::Core::HR));
    REQUIRE(hr != nullptr);
    REQUIRE(hr->size() == 1);
    CHECK((*hr)[0].value == 80.0);
    CHECK(built.diagnostics.size() == 1);
}

TEST_CASE("shuffled input comes out sorted") {
    SplitMix64 rng(3);
    std::vector<VitalSample> samples;
    for (int i = 0; i < 100; ++i)
        samples.push_back(
            {static_cast<std::int64_t>(rng.next() % 100000), SignalId(SignalId::Core::RR),
             rng.uniform(10, 30), kNoQuality});
    const BuildResult built = build_record(PatientMeta{"s", 0, 100000, {}, Sex::unknown}, samples);
    const auto* rr = built.record.find(SignalId(SignalId::Core::RR));
    REQUIRE(rr != nullptr);

    std::vector<std::int64_t> expected;
    for (const VitalSample& s : samples) expected.push_back(s.timestamp);
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    REQUIRE(rr->size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK((*rr)[i].timestamp == expected[i]);
}

TEST_CASE("empty sample list builds a valid empty record") {
    const BuildResult built = build_record(PatientMeta{"e", 0, 10, {}, Sex::unknown}, {});
    CHECK(built.record.empty());
    CHECK(built.diagnostics.empty());
}

TEST_CASE("serialize-parse round trip is a fixpoint on canonical form") {
    SplitMix64 rng(17);
    std::vector<VitalSample> samples;
    const SignalId ids[] = {SignalId(SignalId::Core::HR), SignalId(SignalId::Core::TEMP),
                            SignalId::other("EDA")};
    for (int i = 0; i < 500; ++i) {
        VitalSample s;
        s.timestamp = 1583000000 + i;
        s.signal = ids[rng.uniform_int(0, 2)];
        s.value = rng.uniform(-50, 150);
        s.quality = rng.next_unit() < 0.5 ? static_cast<std::int16_t>(rng.uniform_int(0, 100))
                                          : kNoQuality;
        samples.push_back(s);
    }
    const std::string canonical = serialize_samples_csv(samples);
    const ParseResult reparsed = parse_text(canonical);
    CHECK(reparsed.diagnostics.empty());
    CHECK(serialize_samples_csv(reparsed.samples) == canonical);
}

TEST_CASE("build_record is idempotent over flattened records") {
    SplitMix64 rng(23);
    PatientRecord record = oracle::random_record(rng);
    const BuildResult rebuilt = build_record(record.meta, flatten_record(record));
    CHECK(oracle::records_equal(record, rebuilt.record));
    CHECK(rebuilt.diagnostics.empty());
}

TEST_CASE("patient metadata accepts ISO and epoch timestamps") {
    std::istringstream in("patient_id,admission_start,admission_end,age,sex\n"
                          "p1,2020-03-01T08:00:00Z,1583481600,64,m\n"
                          "p2,2020-03-02,2020-03-01,,f\n"
                          "p3,2020-03-02,2020-03-05,,\n");
    const MetaParseResult r = parse_patient_meta_csv(in);
    REQUIRE(r.patients.size() == 2);
    CHECK(r.patients[0].patient_id == "p1");
    CHECK(r.patients[0].admission_start == 1583049600);
    CHECK(r.patients[0].admission_end == 1583481600);
    CHECK(r.patients[0].age == 64);
    CHECK(r.patients[0].sex == Sex::male);
    CHECK(r.patients[1].sex == Sex::unknown);
    REQUIRE(r.diagnostics.size() == 1); // start >= end
    CHECK(r.diagnostics[0].line == 3);
}

TEST_CASE("annotation rows parse with quoted text") {
    std::istringstream in("patient_id,timestamp,text\n"
                          "p1,1583049600,\"oxygen, 2 l/min\"\n");
    const AnnotationParseResult r = parse_annotations_csv(in);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].text == "oxygen, 2 l/min");
    const std::string back = serialize_annotations_csv(r.rows);
    std::istringstream in2(back);
    CHECK(parse_annotations_csv(in2).rows[0].text == "oxygen, 2 l/min");
}
