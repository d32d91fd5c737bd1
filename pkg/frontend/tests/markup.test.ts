import { describe, expect, it } from "vitest";

import { escapeHtml, highlight, messageHtml, splitSegments } from "../src/markup.js";

describe("splitSegments", () => {
  it("separates prose from fenced code", () => {
    const segments = splitSegments("Here you go:\n```c\nint x;\n```\nAsk away.");
    expect(segments).toEqual([
      { kind: "text", text: "Here you go:" },
      { kind: "code", text: "int x;", lang: "c" },
      { kind: "text", text: "Ask away." },
    ]);
  });

  it("keeps an unterminated fence as code to the end", () => {
    const segments = splitSegments("look:\n```python\nx = 1\ny = 2");
    expect(segments.at(-1)).toEqual({ kind: "code", text: "x = 1\ny = 2", lang: "python" });
  });

  it("treats a fence-with-info line inside a block as content", () => {
    const segments = splitSegments("```\nouter\n```c\n```");
    expect(segments).toEqual([{ kind: "code", text: "outer\n```c", lang: undefined }]);
  });

  it("drops empty code fences", () => {
    expect(splitSegments("```\n\n```")).toEqual([]);
  });
});

describe("escaping and highlighting", () => {
  it("escapes markup in prose and code", () => {
    const html = messageHtml('Use <b> & "quotes"\n```c\nif (a < b) return 1;\n```');
    expect(html).not.toContain("<b>");
    expect(html).toContain("&lt;b&gt;");
    expect(html).toContain("a &lt; b");
  });

  it("wraps keywords only inside our own spans", () => {
    const html = highlight("int main(void) { return 0; }", "c");
    expect(html).toContain('<span class="kw">int</span>');
    expect(html).toContain('<span class="kw">return</span>');
  });

  it("python keywords with python hint", () => {
    const html = highlight("def f():\n    return None", "python");
    expect(html).toContain('<span class="kw">def</span>');
  });

  it("script injection in code stays inert text", () => {
    const html = messageHtml("```\n<script>alert(1)</script>\n```");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("escapeHtml", () => {
  it("handles all four specials", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe("&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;");
  });
});
