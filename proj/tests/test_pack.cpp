#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "saphir/error.hpp"
#include "saphir/pack.hpp"
#include "saphir/sample.hpp"
#include "saphir/tar.hpp"

using namespace saphir;
using namespace saphir::testing;

namespace {

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

std::string rewrite_entry(const std::string& archive, const std::string& path,
                          const std::function<std::string(std::string)>& edit) {
  auto entries = tar::read(archive);
  for (auto& e : entries) {
    if (e.path == path) e.bytes = edit(e.bytes);
  }
  return tar::write(entries);
}

std::set<std::string> variant_locales(const ContentPack& pack) {
  std::set<std::string> out;
  for (const auto& [key, v] : pack.catalog.variants) out.insert(key.locale);
  return out;
}

}  // namespace

TEST(Tar, RoundTrip) {
  std::vector<tar::Entry> entries = {
      {"a.json", "{}\n"},
      {"dir/empty", ""},
      {"dir/block", std::string(512, 'x')},
      {"dir/binary", std::string("\0\1\2\xff", 4)},
      {std::string(120, 'p') + "/" + std::string(90, 'n'), "long path"},
  };
  const std::string archive = tar::write(entries);
  EXPECT_EQ(archive.size() % 512, 0u);
  EXPECT_EQ(tar::read(archive), entries);
  EXPECT_EQ(tar::write(entries), archive);
}

TEST(Tar, PathTooLong) {
  EXPECT_EQ(error_of([] { tar::write({{std::string(300, 'x'), ""}}); }), ErrorCode::InvalidArgument);
}

TEST(Tar, CorruptChecksum) {
  std::string archive = tar::write({{"a", "hello"}});
  archive[0] = 'b';
  EXPECT_EQ(error_of([&] { tar::read(archive); }), ErrorCode::ParseError);
}

TEST(Tar, Truncated) {
  std::string archive = tar::write({{"a", std::string(2000, 'z')}});
  EXPECT_EQ(error_of([&] { tar::read(archive.substr(0, 1024)); }), ErrorCode::ParseError);
}

TEST(Tar, ReadableBySystemTar) {
  if (std::system("command -v tar >/dev/null 2>&1") != 0) GTEST_SKIP() << "no tar binary";
  TempDir dir;
  const auto file = dir / "pack.tar";
  std::ofstream(file, std::ios::binary) << write_pack(make_pack(sample_catalog()));
  const std::string cmd = "tar -tf '" + file.string() + "' | grep -c '^modules/water-filtration/resources/quiz.json$'";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[16] = {};
  ASSERT_NE(fgets(buf, sizeof buf, pipe), nullptr);
  pclose(pipe);
  EXPECT_EQ(std::string(buf), "1\n");
}

TEST(Pack, DeterministicBytes) {
  const Catalog c = sample_catalog();
  EXPECT_EQ(write_pack(make_pack(c)), write_pack(make_pack(c)));
}

TEST(Pack, ReadWriteFixpoint) {
  Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    const std::string bytes = write_pack(make_pack(random_catalog(rng)));
    EXPECT_EQ(write_pack(read_pack(bytes)), bytes) << "catalog " << i;
  }
}

TEST(Pack, SampleStats) {
  const ContentPack pack = make_pack(sample_catalog());
  EXPECT_EQ(pack.stats.module_count, 6u);
  EXPECT_GE(pack.stats.resource_count, 43u);
  EXPECT_EQ(pack.stats.language_count, 5u);
  EXPECT_EQ(pack.stats.category_count(), 4u);
  std::size_t sum = 0;
  for (const auto& [c, n] : pack.stats.modules_per_category) sum += n;
  EXPECT_EQ(sum, 6u);
}

TEST(Pack, LocaleFilter) {
  const Catalog c = sample_catalog();
  const ContentPack fr = make_pack(c, std::set<std::string>{"fr"});
  EXPECT_EQ(variant_locales(fr), std::set<std::string>{"fr"});
  const ContentPack back = read_pack(write_pack(fr));
  EXPECT_EQ(variant_locales(back), std::set<std::string>{"fr"});
  EXPECT_EQ(error_of([&] { make_pack(c, std::set<std::string>{"de"}); }), ErrorCode::UnknownLocale);
}

TEST(Pack, OnlyCompleteVariants) {
  const ContentPack pack = make_pack(sample_catalog());
  for (const auto& [key, v] : pack.catalog.variants) EXPECT_EQ(v.status, VariantStatus::Complete);
}

TEST(Pack, OnlyReferencedAssets) {
  Catalog c = sample_catalog();
  const std::string stray = "not referenced anywhere";
  c.assets[content_hash(stray)] = Asset{content_hash(stray), "text/plain", stray};
  EXPECT_EQ(make_pack(c).catalog.assets.count(content_hash(stray)), 0u);
}

TEST(Pack, VersionNinetyNine) {
  const std::string bytes = write_pack(make_pack(sample_catalog()));
  const std::string tampered = rewrite_entry(bytes, "manifest.json", [](std::string s) {
    Json m = parse_json(s);
    m["format_version"] = 99;
    return canonical_dump(m);
  });
  EXPECT_EQ(error_of([&] { read_pack(tampered); }), ErrorCode::VersionMismatch);
}

TEST(Pack, TamperedAssetRejected) {
  Catalog c = sample_catalog();
  const std::string bytes = write_pack(make_pack(c));
  const std::string asset_path = "assets/" + c.assets.begin()->first;
  const std::string tampered = rewrite_entry(bytes, asset_path, [](std::string s) { return s + " "; });
  EXPECT_THROW(read_pack(tampered), Error);
}

TEST(Pack, NotATar) {
  EXPECT_EQ(error_of([] { read_pack("hello"); }), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { read_pack(tar::write({{"other.txt", "x"}})); }), ErrorCode::ParseError);
}

TEST(Import, IntoEmptyCreatesEverything) {
  const ContentPack pack = make_pack(sample_catalog());
  Catalog target;
  ImportReport report = import_pack(target, pack);
  EXPECT_EQ(report.created, pack_item_count(pack));
  EXPECT_EQ(report.updated, 0u);
  EXPECT_EQ(report.skipped, 0u);
  EXPECT_EQ(write_pack(make_pack(target)), write_pack(pack));
}

TEST(Import, SecondImportAllSkipped) {
  const ContentPack pack = make_pack(sample_catalog());
  Catalog target;
  import_pack(target, pack);
  const Catalog before = target;
  ImportReport again = import_pack(target, pack);
  EXPECT_EQ(again.created, 0u);
  EXPECT_EQ(again.updated, 0u);
  EXPECT_EQ(again.skipped, pack_item_count(pack));
  EXPECT_EQ(target, before);
}

TEST(Import, ChangedSourceStalesLocalVariantsAndKeepsRevisionsMonotone) {
  Catalog local = sample_catalog();
  Catalog remote = local;
  const ResourceKey key{"water-filtration", ResourceKind::Quiz};
  auto& quiz = std::get<Quiz>(remote.modules.at(key.module_id).resources.at(key.kind));
  quiz.questions[0].title = "Changed upstream";
  // Upstream edits stale upstream variants, so the pack carries none for it.
  EXPECT_FALSE(touch_source(remote, key.module_id, key.kind).empty());
  const auto local_revision = local.revision_of(key);
  const Catalog original = local;

  ImportReport report = import_pack(local, make_pack(remote));
  EXPECT_EQ(report.updated, 1u);
  EXPECT_EQ(report.created, 0u);
  EXPECT_GT(local.revision_of(key), local_revision);
  std::size_t stale = 0;
  for (const auto& [k, v] : local.variants) {
    if (k.resource() == key) {
      EXPECT_EQ(v.status, VariantStatus::Stale) << k.str();
      ++stale;
    } else {
      EXPECT_EQ(v, original.variants.at(k)) << k.str();
    }
  }
  EXPECT_GT(stale, 0u);
  EXPECT_EQ(std::get<Quiz>(local.modules.at(key.module_id).resources.at(key.kind)).questions[0].title,
            "Changed upstream");
}

TEST(Import, InvalidPackLeavesCatalogUntouched) {
  Catalog target = sample_catalog();
  const Catalog before = target;
  ContentPack bad = make_pack(sample_catalog());
  std::get<Quiz>(bad.catalog.modules.at("biodiversity").resources.at(ResourceKind::Quiz))
      .questions[0]
      .propositions.resize(1);
  EXPECT_EQ(error_of([&] { import_pack(target, bad); }), ErrorCode::ValidationFailure);
  EXPECT_EQ(target, before);
}

TEST(Import, FixpointOnRandomCatalogs) {
  Rng rng(71);
  for (int i = 0; i < 30; ++i) {
    const std::string first = write_pack(make_pack(random_catalog(rng)));
    Catalog fresh;
    import_pack(fresh, read_pack(first));
    EXPECT_EQ(write_pack(make_pack(fresh)), first) << "catalog " << i;
  }
}

TEST(PackRecords, VariantJsonRoundTrip) {
  const Catalog c = sample_catalog();
  for (const auto& [key, v] : c.variants) {
    EXPECT_EQ(variant_from_json(to_json(v)), v) << key.str();
  }
}
