package com.app.entries;

public class EntryItem {
  protected String name;
  protected String normalizedName;

  public void setName(String name) {
    if (name != null) {
      this.name = name;
      this.normalizedName = StringNormalizer.normalizeWithResult(this.name, false);
    } else {
      this.name = "null";
      this.normalizedName = null;
    }
  }
}

class TagEntry extends EntryItem {
  public final String id = "tag:";

  @Override
  public void setName(String name) {
    if (name != null) {
      if (!id.endsWith(name))
        throw new IllegalStateException("The display name and tag name need to be equal.");
      super.setName(name);
    } else {
      super.setName(id.substring(SCHEME.length()));
    }
  }
}
