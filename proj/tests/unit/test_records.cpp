#include <doctest.h>

#include <fstream>

#include "cotkit/records.hpp"
#include "cotkit/validate.hpp"
#include "support.hpp"

using namespace cotkit;

TEST_SUITE("records") {
  TEST_CASE("node labels") {
    CHECK(node_label(12) == "N12");
    CHECK(parse_node_label(" N7 ") == 7);
    CHECK_FALSE(parse_node_label("N"));
    CHECK_FALSE(parse_node_label("7"));
    CHECK_FALSE(parse_node_label("N0"));
    CHECK_FALSE(parse_node_label("N3a"));
  }

  TEST_CASE("enums parse leniently") {
    CHECK(node_type_from_string("verification") == NodeType::Verification);
    CHECK(node_type_from_string(" CONCLUSION ") == NodeType::Conclusion);
    CHECK_FALSE(node_type_from_string("Summary"));
    CHECK(conclusion_kind_from_string("Intermediate Conclusion") == ConclusionKind::IntermediateConclusion);
    CHECK(conclusion_kind_from_string("answering") == ConclusionKind::AnsweringConclusion);
    CHECK(conclusion_kind_from_string("AnsweringConclusion") == ConclusionKind::AnsweringConclusion);
    CHECK_FALSE(conclusion_kind_from_string("final"));
    CHECK(provenance_from_string("teacher_guided") == Provenance::teacher_guided);
  }

  TEST_CASE("flags") {
    CHECK(parse_flag(Json(1)) == true);
    CHECK(parse_flag(Json(0)) == false);
    CHECK(parse_flag(Json("true")) == true);
    CHECK(parse_flag(Json("0")) == false);
    CHECK_FALSE(parse_flag(Json(2)));
    CHECK_FALSE(parse_flag(Json("yes")));
  }

  TEST_CASE("json round trips") {
    ProblemRecord p{"p1", "What is 2+2?", "4", {{"benchmark", "gsm8k"}}};
    CHECK(problem_from_json(to_json(p)) == p);

    TraceRecord t{"t1", "p1", "<think>x</think>", Provenance::teacher_guided, Json{{"seed", 3}}};
    CHECK(trace_from_json(to_json(t)) == t);

    SourceNodeSequence s{"t1", "p1", {{1, "N1", "a. "}, {2, "N2", "So b."}}};
    CHECK(nodes_from_json(to_json(s)) == s);

    LabelSet l{"t1", {{"N1", NodeType::Exploration, NodeType::Verification}, {"N2", NodeType::Conclusion, {}}}, {}};
    CHECK(label_set_from_json(to_json(l)) == l);

    JudgmentSet j{"t1", {{"N2", true, ConclusionKind::AnsweringConclusion}}, std::string("raw")};
    CHECK(judgment_set_from_json(to_json(j)) == j);
  }

  TEST_CASE("schema field names") {
    Json lab = to_json(TaxonomyLabel{"N1", NodeType::Verification, std::nullopt});
    CHECK(lab["id"] == "N1");
    CHECK(lab["taxonomy_primary_type"] == "Verification");
    CHECK(lab["taxonomy_secondary_type"].is_null());
    Json jud = to_json(ConclusionJudgment{"N3", true, ConclusionKind::AnsweringConclusion});
    CHECK(jud["conclusion_node"] == "N3");
    CHECK(jud["is_correct"] == 1);
    CHECK(jud["type"] == "Answering Conclusion");
  }

  TEST_CASE("conversion errors") {
    CHECK_THROWS_AS(problem_from_json(Json{{"id", "p"}}), Error);
    CHECK_THROWS_AS(trace_from_json(Json{{"id", "t"}, {"problem_id", "p"}, {"text", 3}}), Error);
  }

  TEST_CASE("validate_record finds every problem") {
    auto rep = validate_record(R"({"trace_id":"t","nodes":[{"index":1,"label":"N1","text":""},)"
                               R"({"index":3,"label":"N2","text":"x"}]})",
                               SchemaKind::nodes);
    CHECK_FALSE(rep.ok());
    CHECK(rep.has("EMPTY_TEXT"));
    CHECK(rep.has("INDEX_GAP"));

    auto bad_json = validate_record("{\"id\": ", SchemaKind::problem);
    CHECK(bad_json.has("PARSE"));
    CHECK(bad_json.diagnostics[0].location.rfind("byte", 0) == 0);

    auto missing = validate_record(R"({"id":"p","question":"q"})", SchemaKind::problem);
    CHECK(missing.has("MISSING_FIELD"));

    auto labels = validate_record(R"({"trace_id":"t","labels":[)"
                                  R"({"id":"N1","taxonomy_primary_type":"Musing"},)"
                                  R"({"id":"N1","taxonomy_primary_type":"Conclusion","taxonomy_secondary_type":"Conclusion"}]})",
                                  SchemaKind::labels);
    CHECK(labels.has("BAD_CLASS"));
    CHECK(labels.has("DUPLICATE"));
    CHECK(labels.has("SECONDARY_EQUALS_PRIMARY"));

    auto judg = validate_record(R"({"trace_id":"t","judgments":[{"conclusion_node":"N1","is_correct":5,"type":"odd"}]})",
                                SchemaKind::judgments);
    CHECK(judg.has("BAD_ENUM"));
    CHECK(judg.has("BAD_KIND"));

    CHECK(validate_record(R"({"id":"p","question":"q","gold_answer":"4"})", SchemaKind::problem).ok());
  }

  TEST_CASE("validate_file reports duplicate ids with line numbers") {
    auto dir = testkit::scratch_dir("records_validate");
    auto path = (dir / "problems.jsonl").string();
    std::ofstream(path) << R"({"id":"a","question":"q","gold_answer":"1"})" "\n"
                        << R"({"id":"b","question":"q","gold_answer":"2"})" "\n\n"
                        << R"({"id":"a","question":"q","gold_answer":"3"})" "\n";
    auto reports = validate_file(path, SchemaKind::problem);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].line == 4);
    CHECK(reports[0].report.has("DUPLICATE_ID"));
  }

  TEST_CASE("schema kinds") {
    CHECK(schema_kind_from_string("judgments") == SchemaKind::judgments);
    CHECK_THROWS_AS(schema_kind_from_string("bogus"), Error);
  }
}
