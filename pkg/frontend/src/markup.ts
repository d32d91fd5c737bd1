// Assistant replies mix prose with fenced code blocks. This mirrors the
// server's fence rule: an opening line of backticks with optional info, a
// closing line of backticks only, and an unterminated fence running to the
// end of the message.

export interface Segment {
  kind: "text" | "code";
  text: string;
  lang?: string;
}

export function splitSegments(content: string): Segment[] {
  const segments: Segment[] = [];
  let textLines: string[] = [];
  let codeLines: string[] | null = null;
  let lang: string | undefined;

  const flushText = () => {
    const text = textLines.join("\n");
    if (text.trim()) segments.push({ kind: "text", text });
    textLines = [];
  };

  for (const line of content.split("\n")) {
    if (codeLines === null) {
      const open = line.match(/^\s*```(.*)$/);
      if (open) {
        flushText();
        const info = open[1].trim();
        lang = info ? info.split(/\s+/)[0] : undefined;
        codeLines = [];
      } else {
        textLines.push(line);
      }
    } else if (/^\s*`{3,}\s*$/.test(line)) {
      segments.push({ kind: "code", text: codeLines.join("\n"), lang });
      codeLines = null;
    } else {
      codeLines.push(line);
    }
  }
  if (codeLines !== null) {
    segments.push({ kind: "code", text: codeLines.join("\n"), lang });
  } else {
    flushText();
  }
  return segments.filter((s) => s.kind === "text" || s.text.trim().length > 0);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const C_KEYWORDS =
  /\b(int|char|double|float|void|struct|return|if|else|for|while|break|continue|const|sizeof)\b/g;
const PY_KEYWORDS =
  /\b(def|return|if|elif|else|for|while|in|not|and|or|None|True|False|class|import|from|pass|raise)\b/g;

/** Minimal keyword highlighting; escaping happens first, so the generated
 * markup contains only our own span tags. */
export function highlight(code: string, lang?: string): string {
  const escaped = escapeHtml(code);
  const keywords = lang === "python" || lang === "py" ? PY_KEYWORDS : C_KEYWORDS;
  return escaped.replace(keywords, '<span class="kw">$1</span>');
}

export function messageHtml(content: string): string {
  return splitSegments(content)
    .map((segment) =>
      segment.kind === "text"
        ? `<p>${escapeHtml(segment.text)}</p>`
        : `<pre class="code-block" data-lang="${escapeHtml(segment.lang ?? "")}">` +
          `<code>${highlight(segment.text, segment.lang)}</code></pre>`,
    )
    .join("\n");
}
