// Copyright 2026 The Mist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "mist/errors.h"
#include "mist/python/ast.h"
#include "mist/python/parser.h"
#include "mist/python/unparse.h"

namespace mist::py {
namespace {

// Expected outputs were produced by CPython 3.10 `ast.unparse(ast.parse(s))`
// and frozen here.
const std::vector<std::pair<std::string, std::string>> kUnparseGoldens = {
    {R"py(x = 1 + 2 * 3
)py",
     R"py(x = 1 + 2 * 3)py"},
    {R"py(x = (1 + 2) * 3
)py",
     R"py(x = (1 + 2) * 3)py"},
    {R"py(y = a ** -b ** c
)py",
     R"py(y = a ** (-b ** c))py"},
    {R"py(z = -(-x)
)py",
     R"py(z = --x)py"},
    {R"py(if a < b <= c: pass
)py",
     R"py(if a < b <= c:
    pass)py"},
    {R"py(f(*args, key=1, **kw)
)py",
     R"py(f(*args, key=1, **kw))py"},
    {R"py(lambda x, /, y=2, *, z: x + y + z
)py",
     R"py(lambda x, /, y=2, *, z: x + y + z)py"},
    {R"py(def f(a, b=1, *c, d, e=2, **g) -> int:
    '''Doc.'''
    return a
)py",
     R"py(def f(a, b=1, *c, d, e=2, **g) -> int:
    """Doc."""
    return a)py"},
    {R"py(class C(B, metaclass=M):
    x: int = 3
)py",
     R"py(class C(B, metaclass=M):
    x: int = 3)py"},
    {R"py(for i in range(10):
    if i % 2:
        continue
else:
    print('done')
)py",
     R"py(for i in range(10):
    if i % 2:
        continue
else:
    print('done'))py"},
    {R"py(while not done and count < 10:
    count += 1
)py",
     R"py(while not done and count < 10:
    count += 1)py"},
    {R"py(try:
    x()
except (A, B) as e:
    raise C from e
else:
    pass
finally:
    cleanup()
)py",
     R"py(try:
    x()
except (A, B) as e:
    raise C from e
else:
    pass
finally:
    cleanup())py"},
    {R"py(with open(p) as f, lock:
    data = f.read()
)py",
     R"py(with open(p) as f, lock:
    data = f.read())py"},
    {R"py(async def g():
    async with a as b:
        await c
    async for x in y:
        yield x
)py",
     R"py(async def g():
    async with a as b:
        await c
    async for x in y:
        yield x)py"},
    {R"py(result = [x * y for x in xs if x for y in ys]
)py",
     R"py(result = [x * y for x in xs if x for y in ys])py"},
    {R"py(d = {k: v for k, v in items.items()}
)py",
     R"py(d = {k: v for (k, v) in items.items()})py"},
    {R"py(s = {1, 2, *rest}
)py",
     R"py(s = {1, 2, *rest})py"},
    {R"py(g = (i for i in range(3))
)py",
     R"py(g = (i for i in range(3)))py"},
    {R"py(t = 1,
)py",
     R"py(t = (1,))py"},
    {R"py(a, *b = c
)py",
     R"py((a, *b) = c)py"},
    {R"py(x = a if b else c
)py",
     R"py(x = a if b else c)py"},
    {R"py(print(f'{x!r:>{width}} and {y=}')
)py",
     R"py(print(f'{x!r:>{width}} and y={y!r}'))py"},
    {R"py(s = 'it\'s' + "quote\"d" + '''tri
ple'''
)py",
     R"py(s = "it's" + 'quote"d' + 'tri\nple')py"},
    {R"py(b = b'\x00\xff' + rb'raw'
)py",
     R"py(b = b'\x00\xff' + b'raw')py"},
    {R"py(n = 0x1F + 1_000 + 1e309 + 2.5j + 0o17
)py",
     R"py(n = 31 + 1000 + 1e309 + 2.5j + 15)py"},
    {R"py(x = a[1:2, ::3]
)py",
     R"py(x = a[1:2, ::3])py"},
    {R"py(del a[0], b.c
)py",
     R"py(del a[0], b.c)py"},
    {R"py(global g
nonlocal_ok = 1
)py",
     R"py(global g
nonlocal_ok = 1)py"},
    {R"py(from .. import (a as b, c)
import os.path as p
)py",
     R"py(from .. import a as b, c
import os.path as p)py"},
    {R"py(assert x, 'message'
)py",
     R"py(assert x, 'message')py"},
    {R"py(if (n := len(a)) > 10:
    pass
)py",
     R"py(if (n := len(a)) > 10:
    pass)py"},
    {R"py(x = not a in b
)py",
     R"py(x = not a in b)py"},
    {R"py(x = a is not None and b not in c or d
)py",
     R"py(x = a is not None and b not in c or d)py"},
    {R"py(@decorator(arg)
def h():
    pass
)py",
     R"py(@decorator(arg)
def h():
    pass)py"},
    {R"py(x = 1 .real + True.real
)py",
     R"py(x = 1 .real + True .real)py"},
    {R"py(if a:
    pass
elif b:
    pass
else:
    pass
)py",
     R"py(if a:
    pass
elif b:
    pass
else:
    pass)py"},
    {R"py(x = yield
)py",
     R"py(x = (yield))py"},
    {R"py(x = (yield from g)
)py",
     R"py(x = (yield from g))py"},
    {R"py(m = a @ b
)py",
     R"py(m = a @ b)py"},
    {R"py(v = ~a << 2 | b & c ^ d >> 1 // e
)py",
     R"py(v = ~a << 2 | b & c ^ d >> 1 // e)py"},
    {R"py(s = u'unicode'
)py",
     R"py(s = u'unicode')py"},
    {R"py(x = '\u00e9\n\t'
)py",
     R"py(x = 'é\n\t')py"},
    {R"py(x = {**a, 'b': 1}
)py",
     R"py(x = {**a, 'b': 1})py"},
    {R"py(raise
)py",
     R"py(raise)py"},
    {R"py(return_ = lambda: (yield)
)py",
     R"py(return_ = lambda : (yield))py"},
};

TEST(UnparseTest, MatchesFrozenGoldens) {
  for (const auto& [source, expected] : kUnparseGoldens) {
    NodePtr tree = Parse(source);
    EXPECT_EQ(Unparse(*tree), expected) << source;
  }
}

TEST(UnparseTest, RoundTripIsStructurallyStable) {
  for (const auto& [source, expected] : kUnparseGoldens) {
    NodePtr tree = Parse(source);
    NodePtr again = Parse(Unparse(*tree));
    EXPECT_TRUE(StructurallyEqual(*tree, *again)) << source;
    EXPECT_EQ(CountDifferences(*tree, *again), 0) << source;
  }
}

TEST(ParserTest, ReportsSyntaxErrorPosition) {
  try {
    Parse("def f(:");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(ParserTest, RejectsMalformedModules) {
  EXPECT_FALSE(Parses("x = 'unterminated\n"));
  EXPECT_FALSE(Parses("if x:\npass\n"));
  EXPECT_FALSE(Parses("def f():\n    return\n  x = 1\n"));
  EXPECT_FALSE(Parses("x = (1, 2\n"));
  EXPECT_FALSE(Parses("f(**a, *b)\n"));
  EXPECT_FALSE(Parses("1 = x\n"));
  EXPECT_FALSE(Parses("x = b'a' 'b'\n"));
  EXPECT_TRUE(Parses(""));
  EXPECT_TRUE(Parses("x = [\n  1,\n    2]\n"));
}

TEST(ParserTest, NormalizesCarriageReturns) {
  NodePtr tree = Parse("x = '''a\r\nb'''\r\ny = 1\r");
  EXPECT_EQ(Unparse(*tree), "x = 'a\\nb'\ny = 1");
}

TEST(AstTest, SpansAreOneBasedLines) {
  NodePtr tree = Parse("a = 1\n\nif a:\n    b = 2\n");
  ASSERT_EQ(tree->list(field::kBody).size(), 2u);
  const Node& branch = *tree->list(field::kBody)[1];
  EXPECT_EQ(branch.kind, NodeKind::kIf);
  EXPECT_EQ(branch.span.line, 3);
  EXPECT_EQ(branch.span.end_line, 4);
  EXPECT_EQ(branch.list(field::kCondBody)[0]->span.col, 4);
}

TEST(AstTest, CountDifferencesStopsAtFirstDifferingNode) {
  NodePtr a = Parse("x = f(1, 2) + g(3)\n");
  NodePtr b = Parse("x = f(1, 5) + g(4)\n");
  NodePtr c = Parse("x = f(1, 2) - g(3)\n");
  EXPECT_EQ(CountDifferences(*a, *b), 2);
  EXPECT_EQ(CountDifferences(*a, *c), 1);
  EXPECT_FALSE(StructurallyEqual(*a, *c));
}

TEST(AstTest, DocstringDetection) {
  NodePtr tree = Parse("'''mod'''\ndef f():\n    'doc'\n    return 1\n");
  EXPECT_NE(Docstring(*tree), nullptr);
  const Node& fn = *tree->list(field::kBody)[1];
  EXPECT_NE(Docstring(fn), nullptr);
  NodePtr plain = Parse("x = 'not a docstring'\n");
  EXPECT_EQ(Docstring(*plain), nullptr);
}

TEST(UnparseTest, SubstitutionLeavesTreeUntouched) {
  NodePtr tree = Parse("y = a + b\n");
  const Node* binop = tree->list(field::kBody)[0]->child(field::kAssignValue);
  NodePtr replacement = Clone(*binop);
  replacement->op = Op::kMult;
  EXPECT_EQ(UnparseWithSubstitution(*tree, binop, *replacement), "y = a * b");
  EXPECT_EQ(Unparse(*tree), "y = a + b");
}

TEST(UnparseTest, SubstitutionKeepsParenthesesForPrecedence) {
  NodePtr tree = Parse("y = (a + b) * c\n");
  const Node* outer = tree->list(field::kBody)[0]->child(field::kAssignValue);
  const Node* inner = outer->child(field::kLeft);
  NodePtr replacement = Clone(*inner);
  replacement->op = Op::kSub;
  EXPECT_EQ(UnparseWithSubstitution(*tree, inner, *replacement),
            "y = (a - b) * c");
}

}  // namespace
}  // namespace mist::py
